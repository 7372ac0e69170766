//! Brute-force two-qubit oracle: explicit 4x4 matrices, no closed forms.
#![allow(dead_code)]

use bellrand::correlations::CorrelatorVector;
use bellrand::qubit::QubitRealization;
use nalgebra::{Matrix2, Matrix4, Vector3, Vector4};
use num_complex::Complex64;

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn pauli() -> [Matrix2<C>; 3] {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        Matrix2::new(z, o, o, z),
        Matrix2::new(z, -i, i, z),
        Matrix2::new(o, z, z, -o),
    ]
}

/// `n · σ`.
pub fn observable(n: &Vector3<f64>) -> Matrix2<C> {
    let [x, y, z] = pauli();
    x * c(n.x, 0.0) + y * c(n.y, 0.0) + z * c(n.z, 0.0)
}

pub fn kron(a: &Matrix2<C>, b: &Matrix2<C>) -> Matrix4<C> {
    Matrix4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// `cos θ |00⟩ + sin θ |11⟩`.
pub fn state(theta: f64) -> Vector4<C> {
    Vector4::new(c(theta.cos(), 0.0), c(0.0, 0.0), c(0.0, 0.0), c(theta.sin(), 0.0))
}

/// `tr[(A ⊗ B) |ψ⟩⟨ψ|]`, taking the real part after checking the imaginary
/// part vanishes.
pub fn expectation(theta: f64, a: &Matrix2<C>, b: &Matrix2<C>) -> f64 {
    let psi = state(theta);
    let rho = psi * psi.adjoint();
    let t = (kron(a, b) * rho).trace();
    assert!(t.im.abs() < 1e-12, "non-real expectation {t}");
    t.re
}

pub fn dense_correlators(r: &QubitRealization) -> CorrelatorVector {
    let id = Matrix2::identity();
    let theta = r.theta();
    let alice = [0, 1].map(|u| expectation(theta, &observable(&r.a[u]), &id));
    let bob = [0, 1].map(|v| expectation(theta, &id, &observable(&r.b[v])));
    let joint = [0, 1].map(|u| [0, 1].map(|v| expectation(theta, &observable(&r.a[u]), &observable(&r.b[v]))));
    CorrelatorVector::new(alice, bob, joint)
}
