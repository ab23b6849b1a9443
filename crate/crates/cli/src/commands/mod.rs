pub mod algebra;
pub mod construct;
pub mod density;
pub mod family;
pub mod nogo;
