//! Cantor pairing, used to enumerate countable dense sets deterministically.

/// π(a, b) = (a+b)(a+b+1)/2 + b; `None` on overflow.
pub fn pair(a: u64, b: u64) -> Option<u64> {
    let s = a.checked_add(b)?;
    let t = (s as u128) * (s as u128 + 1) / 2 + b as u128;
    u64::try_from(t).ok()
}

/// Inverse of [`pair`].
pub fn unpair(z: u64) -> (u64, u64) {
    // Largest w with w(w+1)/2 <= z.
    let mut w = (((8.0 * z as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while (w as u128) * (w as u128 + 1) / 2 > z as u128 {
        w -= 1;
    }
    while ((w + 1) as u128) * ((w + 2) as u128) / 2 <= z as u128 {
        w += 1;
    }
    let t = (w as u128 * (w as u128 + 1) / 2) as u64;
    let b = z - t;
    (w - b, b)
}

/// 0, −1, 1, −2, 2, … ↔ 0, 1, 2, 3, 4, …
pub fn zigzag_decode(n: u64) -> i64 {
    if n.is_multiple_of(2) {
        (n / 2) as i64
    } else {
        -(n.div_ceil(2) as i64)
    }
}

pub fn zigzag_encode(v: i64) -> u64 {
    if v >= 0 {
        2 * v as u64
    } else {
        2 * v.unsigned_abs() - 1
    }
}

/// Splits `z` into `k` naturals by repeated unpairing (the last one takes the rest).
pub fn unpack(mut z: u64, k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        if i + 1 == k {
            out.push(z);
        } else {
            let (a, rest) = unpair(z);
            out.push(a);
            z = rest;
        }
    }
    out
}

/// Inverse of [`unpack`].
pub fn pack(values: &[u64]) -> Option<u64> {
    let (last, init) = values.split_last()?;
    let mut z = *last;
    for &a in init.iter().rev() {
        z = pair(a, z)?;
    }
    Some(z)
}

/// Splits `z` into `k` naturals by unpairing into halves recursively, so all
/// components grow at comparable rates (unlike [`unpack`], whose later
/// components need towering `z`).
pub fn unpack_balanced(z: u64, k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    split_balanced(z, k, &mut out);
    out
}

fn split_balanced(z: u64, k: usize, out: &mut Vec<u64>) {
    match k {
        0 => {}
        1 => out.push(z),
        _ => {
            let (a, b) = unpair(z);
            split_balanced(a, k / 2, out);
            split_balanced(b, k - k / 2, out);
        }
    }
}

/// Inverse of [`unpack_balanced`].
pub fn pack_balanced(values: &[u64]) -> Option<u64> {
    match values.len() {
        0 => None,
        1 => Some(values[0]),
        k => pair(pack_balanced(&values[..k / 2])?, pack_balanced(&values[k / 2..])?),
    }
}
