//! Truncated π-periodic trigonometric basis and the matrix representations
//! of the scaled operators acting on it.
//!
//! Basis ordering: index 0 is the normalized constant, odd indices are sines,
//! even indices cosines, so that index μ carries wavenumber μ+1 (μ odd) or
//! μ (μ even). In this basis the negative second derivative is diagonal, the
//! first derivative couples each (sin, cos) pair, and cos(2z) lives on the
//! second off-diagonal only.

use crate::error::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Truncation of the trigonometric basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisSpec {
    n_basis: usize,
}

impl BasisSpec {
    pub fn new(n_basis: usize) -> Result<Self> {
        if n_basis == 0 {
            return Err(Error::InvalidConfig(
                "n_basis must be at least 1".to_string(),
            ));
        }
        Ok(Self { n_basis })
    }

    pub fn n_basis(&self) -> usize {
        self.n_basis
    }

    /// Wavenumber carried by basis function μ (0 for the constant).
    pub fn wavenumber(mu: usize) -> usize {
        if mu == 0 {
            0
        } else if mu % 2 == 1 {
            mu + 1
        } else {
            mu
        }
    }
}

/// Symmetry class recorded with every operator matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HermitianKind {
    Hermitian,
    AntiHermitian,
    General,
}

/// Dense matrix of a scaled operator in the truncated trigonometric basis.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    entries: Array2<C64>,
    kind: HermitianKind,
}

impl OperatorMatrix {
    const SYMMETRY_TOL: f64 = 1e-12;

    pub fn new(entries: Array2<C64>, kind: HermitianKind) -> Self {
        assert_eq!(entries.nrows(), entries.ncols(), "operator must be square");
        let op = Self { entries, kind };
        debug_assert!(
            op.symmetry_defect() <= Self::SYMMETRY_TOL,
            "operator entries inconsistent with {:?}: defect {:.3e}",
            op.kind,
            op.symmetry_defect()
        );
        op
    }

    pub fn hermitian(entries: Array2<C64>) -> Self {
        Self::new(entries, HermitianKind::Hermitian)
    }

    pub fn anti_hermitian(entries: Array2<C64>) -> Self {
        Self::new(entries, HermitianKind::AntiHermitian)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn kind(&self) -> HermitianKind {
        self.kind
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<C64> {
        self.entries
    }

    /// max elementwise deviation from the declared symmetry class.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.dim();
        let mut defect = 0.0f64;
        match self.kind {
            HermitianKind::General => {}
            HermitianKind::Hermitian => {
                for i in 0..n {
                    for j in i..n {
                        defect = defect
                            .max((self.entries[[i, j]] - self.entries[[j, i]].conj()).norm());
                    }
                }
            }
            HermitianKind::AntiHermitian => {
                for i in 0..n {
                    for j in i..n {
                        defect = defect
                            .max((self.entries[[i, j]] + self.entries[[j, i]].conj()).norm());
                    }
                }
            }
        }
        defect
    }
}

/// Matrix of −d²/dz²: diagonal with entries 0, 4, 4, 16, 16, 36, 36, …
pub fn build_second_derivative_matrix(spec: BasisSpec) -> OperatorMatrix {
    let n = spec.n_basis();
    let mut m = Array2::<C64>::zeros((n, n));
    for mu in 0..n {
        let w = BasisSpec::wavenumber(mu) as f64;
        m[[mu, mu]] = C64::new(w * w, 0.0);
    }
    OperatorMatrix::hermitian(m)
}

/// Matrix of d/dz: real antisymmetric 2×2 blocks coupling each (sin, cos)
/// pair of equal wavenumber; row and column 0 vanish.
pub fn build_first_derivative_matrix(spec: BasisSpec) -> OperatorMatrix {
    let n = spec.n_basis();
    let mut m = Array2::<C64>::zeros((n, n));
    let mut mu = 1;
    while mu + 1 < n {
        let w = (mu + 1) as f64;
        // d/dz sin(wz) = +w cos(wz), d/dz cos(wz) = -w sin(wz)
        m[[mu + 1, mu]] = C64::new(w, 0.0);
        m[[mu, mu + 1]] = C64::new(-w, 0.0);
        mu += 2;
    }
    OperatorMatrix::anti_hermitian(m)
}

/// Matrix of cos(2z): second off-diagonal couplings of 1/2, except the
/// constant-to-cos(2z) element which carries an extra √2.
pub fn build_cosine_matrix(spec: BasisSpec) -> OperatorMatrix {
    let n = spec.n_basis();
    let mut m = Array2::<C64>::zeros((n, n));
    if n > 2 {
        m[[0, 2]] = C64::new(std::f64::consts::SQRT_2 / 2.0, 0.0);
        m[[2, 0]] = m[[0, 2]];
    }
    for mu in 1..n.saturating_sub(2) {
        m[[mu, mu + 2]] = C64::new(0.5, 0.0);
        m[[mu + 2, mu]] = m[[mu, mu + 2]];
    }
    OperatorMatrix::hermitian(m)
}

/// Ordinary parity of basis function μ under z → −z.
pub fn basis_parity(mu: usize) -> i32 {
    if mu % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Evaluate φ_μ(z).
pub fn evaluate_basis_function(mu: usize, z: f64) -> f64 {
    if mu == 0 {
        (1.0 / PI).sqrt()
    } else if mu % 2 == 1 {
        (2.0 / PI).sqrt() * (((mu + 1) as f64) * z).sin()
    } else {
        (2.0 / PI).sqrt() * ((mu as f64) * z).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize) -> BasisSpec {
        BasisSpec::new(n).unwrap()
    }

    #[test]
    fn second_derivative_diagonal() {
        let m = build_second_derivative_matrix(spec(3));
        let e = m.entries();
        assert_eq!(e[[0, 0]], C64::new(0.0, 0.0));
        assert_eq!(e[[1, 1]], C64::new(4.0, 0.0));
        assert_eq!(e[[2, 2]], C64::new(4.0, 0.0));

        let m1 = build_second_derivative_matrix(spec(1));
        assert_eq!(m1.entries()[[0, 0]], C64::new(0.0, 0.0));

        let m5 = build_second_derivative_matrix(spec(5));
        assert_eq!(m5.entries()[[3, 3]], C64::new(16.0, 0.0));
        assert_eq!(m5.entries()[[4, 4]], C64::new(16.0, 0.0));
    }

    #[test]
    fn first_derivative_blocks() {
        let m = build_first_derivative_matrix(spec(6));
        let e = m.entries();
        assert_eq!(e[[1, 2]], C64::new(-2.0, 0.0));
        assert_eq!(e[[2, 1]], C64::new(2.0, 0.0));
        assert_eq!(e[[3, 4]], C64::new(-4.0, 0.0));
        assert_eq!(e[[4, 3]], C64::new(4.0, 0.0));
        for j in 0..6 {
            assert_eq!(e[[0, j]], C64::new(0.0, 0.0));
            assert_eq!(e[[j, 0]], C64::new(0.0, 0.0));
        }
        // antisymmetry: M + Mᵀ = 0
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(e[[i, j]] + e[[j, i]], C64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn cosine_matrix_entries() {
        let m = build_cosine_matrix(spec(7));
        let e = m.entries();
        assert!((e[[0, 2]].re - 0.7071067811865476).abs() < 1e-15);
        assert_eq!(e[[1, 3]], C64::new(0.5, 0.0));
        assert_eq!(e[[2, 4]], C64::new(0.5, 0.0));
        assert_eq!(e[[0, 1]], C64::new(0.0, 0.0));
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(e[[i, j]], e[[j, i]]);
            }
        }
    }

    #[test]
    fn parity_signs() {
        assert_eq!(basis_parity(0), 1);
        assert_eq!(basis_parity(1), -1);
        assert_eq!(basis_parity(2), 1);
        for mu in 0..20 {
            // direct check: parity under z -> -z at a probe point
            let z = 0.413;
            let lhs = evaluate_basis_function(mu, -z);
            let rhs = basis_parity(mu) as f64 * evaluate_basis_function(mu, z);
            assert!((lhs - rhs).abs() < 1e-14);
        }
    }

    #[test]
    fn basis_values() {
        assert!((evaluate_basis_function(0, 1.234) - (1.0 / PI).sqrt()).abs() < 1e-15);
        assert!(
            (evaluate_basis_function(1, PI / 4.0) - (2.0 / PI).sqrt()).abs() < 1e-15,
            "sin(2 * pi/4) = 1"
        );
        assert!((evaluate_basis_function(2, 0.0) - (2.0 / PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn quadrature_orthonormality() {
        // trapezoid rule over [0, π] with 4096 panels
        let n_pts = 4097;
        let h = PI / (n_pts - 1) as f64;
        for mu in 0..16 {
            for nu in 0..16 {
                let mut acc = 0.0;
                for p in 0..n_pts {
                    let z = p as f64 * h;
                    let w = if p == 0 || p == n_pts - 1 { 0.5 } else { 1.0 };
                    acc += w * evaluate_basis_function(mu, z) * evaluate_basis_function(nu, z);
                }
                acc *= h;
                let target = if mu == nu { 1.0 } else { 0.0 };
                assert!(
                    (acc - target).abs() < 1e-10,
                    "⟨{mu}|{nu}⟩ = {acc}, expected {target}"
                );
            }
        }
    }

    #[test]
    fn first_derivative_matches_quadrature() {
        // finite-difference derivative of the basis functions as oracle
        let m = build_first_derivative_matrix(spec(8));
        let n_pts = 8193;
        let h = PI / (n_pts - 1) as f64;
        let dz = 1e-6;
        for mu in 0..8 {
            for nu in 0..8 {
                let mut acc = 0.0;
                for p in 0..n_pts {
                    let z = p as f64 * h;
                    let w = if p == 0 || p == n_pts - 1 { 0.5 } else { 1.0 };
                    let dphi = (evaluate_basis_function(nu, z + dz)
                        - evaluate_basis_function(nu, z - dz))
                        / (2.0 * dz);
                    acc += w * evaluate_basis_function(mu, z) * dphi;
                }
                acc *= h;
                assert!(
                    (acc - m.entries()[[mu, nu]].re).abs() < 1e-8,
                    "d/dz element ({mu},{nu}): quadrature {acc} vs matrix {}",
                    m.entries()[[mu, nu]].re
                );
            }
        }
    }

    #[test]
    fn builders_are_deterministic() {
        let a = build_cosine_matrix(spec(12));
        let b = build_cosine_matrix(spec(12));
        assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn zero_basis_rejected() {
        assert!(BasisSpec::new(0).is_err());
    }
}
