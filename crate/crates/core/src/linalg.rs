//! Dense linear algebra kernels used throughout the crate.
//!
//! Everything here is self-contained: a Householder reduction to tridiagonal
//! form (tred2), an implicit-shift QL iteration (tql2), a complex Hermitian
//! solver built on the real one via the standard 2n-dimensional embedding,
//! and an eigendecomposition for unitary matrices that stays robust inside
//! eigenphase clusters. Matrix products route complex work through real
//! `general_mat_mul` calls so the matrixmultiply kernels do the heavy lifting.

use crate::error::{Error, Result};
use ndarray::linalg::general_mat_mul;
use ndarray::{Array1, Array2, Axis};
use num_complex::Complex64 as C64;

const MAX_QL_ITER: usize = 60;

/// Split a complex matrix into (real, imaginary) parts.
pub fn split_parts(a: &Array2<C64>) -> (Array2<f64>, Array2<f64>) {
    (a.mapv(|z| z.re), a.mapv(|z| z.im))
}

/// Recombine real and imaginary parts.
pub fn combine_parts(re: &Array2<f64>, im: &Array2<f64>) -> Array2<C64> {
    let mut out = Array2::<C64>::zeros(re.dim());
    out.iter_mut()
        .zip(re.iter().zip(im.iter()))
        .for_each(|(z, (&r, &i))| *z = C64::new(r, i));
    out
}

/// Complex matrix product via four real products.
pub fn matmul(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ar, ai) = split_parts(a);
    let (br, bi) = split_parts(b);
    let mut cr = Array2::<f64>::zeros((a.nrows(), b.ncols()));
    let mut ci = Array2::<f64>::zeros((a.nrows(), b.ncols()));
    general_mat_mul(1.0, &ar, &br, 0.0, &mut cr);
    general_mat_mul(-1.0, &ai, &bi, 1.0, &mut cr);
    general_mat_mul(1.0, &ar, &bi, 0.0, &mut ci);
    general_mat_mul(1.0, &ai, &br, 1.0, &mut ci);
    combine_parts(&cr, &ci)
}

/// Real-by-complex matrix product (two real products).
pub fn matmul_rc(a: &Array2<f64>, b: &Array2<C64>) -> Array2<C64> {
    let (br, bi) = split_parts(b);
    let mut cr = Array2::<f64>::zeros((a.nrows(), b.ncols()));
    let mut ci = Array2::<f64>::zeros((a.nrows(), b.ncols()));
    general_mat_mul(1.0, a, &br, 0.0, &mut cr);
    general_mat_mul(1.0, a, &bi, 0.0, &mut ci);
    combine_parts(&cr, &ci)
}

/// Conjugate transpose.
pub fn adjoint(a: &Array2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

/// max |(U†U - I)_{ij}|
pub fn unitarity_defect(u: &Array2<C64>) -> f64 {
    let p = matmul(&adjoint(u), u);
    let n = u.nrows();
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            defect = defect.max((p[[i, j]] - target).norm());
        }
    }
    defect
}

/// max |A_{ij} - B_{ij}|
pub fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()))
}

/// ⟨a|b⟩ with the physicist's convention (conjugate on the left).
pub fn inner(a: &Array1<C64>, b: &Array1<C64>) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Householder reduction of a real symmetric matrix to tridiagonal form.
///
/// On return `a` holds the accumulated orthogonal transformation Q,
/// `d` the diagonal and `e` the subdiagonal (e[0] = 0) with A = Q T Qᵀ.
fn tred2(a: &mut Array2<f64>, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[[i, k]].abs();
            }
            if scale == 0.0 {
                e[i] = a[[i, l]];
            } else {
                for k in 0..=l {
                    a[[i, k]] /= scale;
                    h += a[[i, k]] * a[[i, k]];
                }
                let f = a[[i, l]];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[[i, l]] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    a[[j, i]] = a[[i, j]] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[[j, k]] * a[[i, k]];
                    }
                    for k in (j + 1)..=l {
                        g += a[[k, j]] * a[[i, k]];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * a[[i, j]];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[[i, j]];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[[j, k]] -= f * e[k] + g * a[[i, k]];
                    }
                }
            }
        } else {
            e[i] = a[[i, l]];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += a[[i, k]] * a[[k, j]];
                }
                for k in 0..i {
                    a[[k, j]] -= g * a[[k, i]];
                }
            }
        }
        d[i] = a[[i, i]];
        a[[i, i]] = 1.0;
        for j in 0..i {
            a[[j, i]] = 0.0;
            a[[i, j]] = 0.0;
        }
    }
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix.
///
/// `d` is the diagonal, `e` the subdiagonal in e[1..]; if `z` is given, its
/// columns are rotated along so that on input z = Q gives eigenvectors of the
/// original matrix. Eigenvalues land in `d`, unsorted.
fn tql2(d: &mut [f64], e: &mut [f64], mut z: Option<&mut Array2<f64>>) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITER {
                return Err(Error::EigenNoConvergence {
                    index: l,
                    iterations: iter,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(zm) = z.as_deref_mut() {
                    for k in 0..zm.nrows() {
                        f = zm[[k, i + 1]];
                        zm[[k, i + 1]] = s * zm[[k, i]] + c * f;
                        zm[[k, i]] = c * zm[[k, i]] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigendecomposition of a real symmetric matrix: values ascending,
/// orthonormal eigenvectors as matching columns.
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Array2<f64>,
}

pub fn eigh_real(a: &Array2<f64>) -> Result<SymEigen> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "eigh_real: matrix must be square");
    let mut q = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut q, &mut d, &mut e);
    tql2(&mut d, &mut e, Some(&mut q))?;
    Ok(sort_sym(d, q))
}

/// Eigenvalues of a real symmetric matrix, ascending, no vectors.
pub fn eigvalsh_real(a: &Array2<f64>) -> Result<Vec<f64>> {
    let n = a.nrows();
    let mut q = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut q, &mut d, &mut e);
    tql2(&mut d, &mut e, None)?;
    d.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(d)
}

/// Eigendecomposition of a real symmetric tridiagonal matrix (diagonal `d`,
/// off-diagonal `e` of length n-1).
pub fn eig_tridiagonal(diag: &[f64], off: &[f64]) -> Result<SymEigen> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n, "eig_tridiagonal: off-diagonal length");
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[1..].copy_from_slice(off);
    let mut q = Array2::<f64>::eye(n);
    tql2(&mut d, &mut e, Some(&mut q))?;
    Ok(sort_sym(d, q))
}

fn sort_sym(d: Vec<f64>, q: Array2<f64>) -> SymEigen {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = Array2::<f64>::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        vectors.column_mut(dst).assign(&q.column(src));
    }
    SymEigen { values, vectors }
}

/// Eigendecomposition of a complex Hermitian matrix: real ascending values,
/// orthonormal complex eigenvectors as columns.
pub struct HermEigen {
    pub values: Vec<f64>,
    pub vectors: Array2<C64>,
}

/// Solve the complex Hermitian problem through the real 2n embedding
/// [[Re A, -Im A], [Im A, Re A]]; each eigenvalue shows up twice and the
/// real pairs (x, y) map back to complex eigenvectors x + iy.
pub fn eigh(a: &Array2<C64>) -> Result<HermEigen> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "eigh: matrix must be square");
    let m = embed_hermitian(a);
    let SymEigen { values, vectors } = eigh_real(&m)?;
    let scale = values.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let cluster = 1e-9 * scale;

    let mut out_vals: Vec<f64> = Vec::with_capacity(n);
    let mut out_vecs: Vec<Array1<C64>> = Vec::with_capacity(n);
    for pass in 0..2 {
        let threshold = if pass == 0 { 0.5 } else { 1e-6 };
        for idx in 0..2 * n {
            if out_vals.len() == n {
                break;
            }
            let lambda = values[idx];
            let mut v: Array1<C64> = (0..n)
                .map(|k| C64::new(vectors[[k, idx]], vectors[[n + k, idx]]))
                .collect();
            // project out already accepted vectors of the same cluster
            for (j, acc) in out_vecs.iter().enumerate() {
                if (out_vals[j] - lambda).abs() < cluster {
                    let c = inner(acc, &v);
                    v.iter_mut().zip(acc.iter()).for_each(|(x, a)| *x -= c * a);
                }
            }
            let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nrm > threshold {
                v.mapv_inplace(|z| z / nrm);
                out_vals.push(lambda);
                out_vecs.push(v);
            }
        }
        if out_vals.len() == n {
            break;
        }
    }
    assert_eq!(
        out_vals.len(),
        n,
        "eigh: embedding extraction produced {} of {} vectors",
        out_vals.len(),
        n
    );
    let mut vec_mat = Array2::<C64>::zeros((n, n));
    for (j, v) in out_vecs.iter().enumerate() {
        vec_mat.column_mut(j).assign(v);
    }
    Ok(HermEigen {
        values: out_vals,
        vectors: vec_mat,
    })
}

/// Eigenvalues of a complex Hermitian matrix, ascending.
pub fn eigvalsh(a: &Array2<C64>) -> Result<Vec<f64>> {
    let m = embed_hermitian(a);
    let all = eigvalsh_real(&m)?;
    // doubled spectrum: take every second entry
    Ok(all.iter().step_by(2).copied().collect())
}

fn embed_hermitian(a: &Array2<C64>) -> Array2<f64> {
    let n = a.nrows();
    let mut m = Array2::<f64>::zeros((2 * n, 2 * n));
    for i in 0..n {
        for j in 0..n {
            let z = a[[i, j]];
            m[[i, j]] = z.re;
            m[[n + i, n + j]] = z.re;
            m[[i, n + j]] = -z.im;
            m[[n + i, j]] = z.im;
        }
    }
    m
}

/// Eigendecomposition of a unitary matrix.
///
/// The Hermitian part (U + U†)/2 pins the eigenvectors except inside
/// cos-degenerate clusters, where the restriction of (U - U†)/(2i) breaks the
/// tie. Multipliers are Rayleigh quotients v†Uv of the final vectors.
pub struct UnitaryEigen {
    /// Unit-circle eigenvalues.
    pub multipliers: Vec<C64>,
    /// Orthonormal eigenvectors, column j belongs to multipliers[j].
    pub vectors: Array2<C64>,
}

pub fn eig_unitary(u: &Array2<C64>, cluster_tol: f64) -> Result<UnitaryEigen> {
    let n = u.nrows();
    let ud = adjoint(u);
    let a = (u + &ud).mapv(|z| z * 0.5);
    let b = (u - &ud).mapv(|z| z * C64::new(0.0, -0.5));
    let HermEigen {
        values,
        mut vectors,
    } = eigh(&a)?;

    // resolve clusters of the cosine spectrum with the sine quadrature
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (values[end] - values[end - 1]).abs() < cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            let sub = vectors.slice(ndarray::s![.., start..end]).to_owned();
            let bsub = matmul(&adjoint(&sub), &matmul(&b, &sub));
            let HermEigen { vectors: w, .. } = eigh(&bsub)?;
            let rotated = matmul(&sub, &w);
            vectors
                .slice_mut(ndarray::s![.., start..end])
                .assign(&rotated);
        }
        start = end;
    }

    let uv = matmul(u, &vectors);
    let mut multipliers = Vec::with_capacity(n);
    for j in 0..n {
        let col = vectors.column(j).to_owned();
        let ucol = uv.column(j).to_owned();
        multipliers.push(inner(&col, &ucol));
    }
    Ok(UnitaryEigen {
        multipliers,
        vectors,
    })
}

/// Frobenius-normalized column access helper.
pub fn column(a: &Array2<C64>, j: usize) -> Array1<C64> {
    a.index_axis(Axis(1), j).to_owned()
}
