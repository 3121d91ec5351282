use std::time::Instant;

use lgcy_core::jacobi::{compute_basis, marginal_monomials, LGPotential};

#[test]
fn quintic_counts() {
    let t = Instant::now();
    let p = LGPotential::fermat(5, 5);
    let b = compute_basis(&p).unwrap();
    let m = marginal_monomials(&p.f, &p.weights).unwrap();
    eprintln!("quintic basis in {:?}", t.elapsed());
    assert_eq!(b.mu, 1024);
    assert_eq!(b.mu_prime, 204);
    assert_eq!(m.len(), 101);
}
