//! The scalar `eps_n` with `*(dz_1 ^ ... ^ dz_n) = eps_n dz_1 ^ ... ^ dz_n` on
//! flat `C^n`, computed from the real Hodge star on `R^{2n}` with
//! coordinates `(x_1, y_1, ..., x_n, y_n)` and volume form
//! `dx_1 ^ dy_1 ^ ... ^ dx_n ^ dy_n`.

use std::collections::BTreeMap;

use crate::numeric::C64;

/// Exterior form as a map from basis bitmasks (bit `2j` is `dx_j`, bit
/// `2j+1` is `dy_j`) to complex coefficients.
type Form = BTreeMap<u64, C64>;

/// Sign of moving the 1-form `bit` past all set bits of `mask` below it.
fn wedge_sign(mask: u64, bit: u32) -> f64 {
    if (mask >> (bit + 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `e_S ^ e_bit`, appended on the right.
fn wedge_one(form: &Form, bit: u32, coeff: C64) -> Form {
    let mut out = Form::new();
    for (&mask, &c) in form {
        if mask & (1 << bit) != 0 {
            continue;
        }
        let s = wedge_sign(mask, bit);
        *out.entry(mask | (1 << bit)).or_insert(C64::new(0.0, 0.0)) += c * coeff * s;
    }
    out
}

fn add(a: &mut Form, b: Form) {
    for (k, v) in b {
        *a.entry(k).or_insert(C64::new(0.0, 0.0)) += v;
    }
}

/// Sign `s` with `e_S ^ e_{S^c} = s vol`.
fn complement_sign(mask: u64, dim: u32) -> f64 {
    let mut form = Form::new();
    form.insert(mask, C64::new(1.0, 0.0));
    for b in 0..dim {
        if mask & (1 << b) == 0 {
            form = wedge_one(&form, b, C64::new(1.0, 0.0));
        }
    }
    form.values().next().map(|c| c.re).unwrap_or(0.0)
}

fn hodge_star(form: &Form, dim: u32) -> Form {
    let full = (1u64 << dim) - 1;
    form.iter()
        .map(|(&m, &c)| (full & !m, c * complement_sign(m, dim)))
        .collect()
}

/// `dz_1 ^ ... ^ dz_n` with `dz_j = dx_j + i dy_j`.
pub fn holomorphic_volume(n: u32) -> BTreeMap<u64, C64> {
    let mut form = Form::new();
    form.insert(0, C64::new(1.0, 0.0));
    for j in 0..n {
        let mut next = wedge_one(&form, 2 * j, C64::new(1.0, 0.0));
        add(&mut next, wedge_one(&form, 2 * j + 1, C64::new(0.0, 1.0)));
        form = next;
        form.retain(|_, c| c.norm() > 0.0);
    }
    form
}

/// The Hodge-star eigenvalue of the holomorphic volume form.
pub fn hodge_star_constant(n: u32) -> C64 {
    assert!((1..=16).contains(&n), "dimension out of range");
    let dz = holomorphic_volume(n);
    let star = hodge_star(&dz, 2 * n);
    let (&key, &c0) = dz.iter().next().expect("nonzero form");
    let eps = star.get(&key).copied().unwrap_or_default() / c0;
    debug_assert!(dz.iter().all(|(k, c)| (star.get(k).copied().unwrap_or_default() - eps * c).norm() < 1e-12));
    eps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn low_dimensions() {
        assert!(close(hodge_star_constant(1), C64::new(0.0, -1.0)));
        assert!(close(hodge_star_constant(2), C64::new(1.0, 0.0)));
        assert!(close(hodge_star_constant(3), C64::new(0.0, -1.0)));
        assert!(close(hodge_star_constant(4), C64::new(1.0, 0.0)));
    }

    #[test]
    fn star_is_an_eigen_map() {
        for n in 1..=5 {
            let dz = holomorphic_volume(n);
            let eps = hodge_star_constant(n);
            let star = hodge_star(&dz, 2 * n);
            for (k, c) in &dz {
                assert!(close(star[k], eps * c));
            }
        }
    }
}
