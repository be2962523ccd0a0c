//! Folded quasienergy spectra and their bookkeeping: Brillouin-zone folding,
//! overlap ordering, photon labels and avoided-crossing scans.
//!
//! Quasienergies are kept in units of ħω and folded into the first
//! Brillouin zone (-1/2, +1/2]. A Floquet state is identified along a sweep
//! by continuing its eigenvector through maximal overlap, which is diabatic
//! through anticrossings narrower than the sweep resolution; the label (n, m)
//! then names the in-zone representative of class n, m counting how often the
//! representative wrapped around the zone since zero drive.

use crate::error::{Error, Result};
use crate::linalg::{self, eig_unitary};
use crate::propagator::{propagate, Generator, MonodromyMatrix, PropagatorConfig};
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Fold a quasienergy in ħω units into (-1/2, +1/2].
pub fn fold_half_open(x: f64) -> f64 {
    let mut f = x - (x - 0.5).ceil();
    if f <= -0.5 {
        f += 1.0;
    } else if f > 0.5 {
        f -= 1.0;
    }
    f
}

/// Distance between two folded quasienergies on the zone circle.
pub fn zone_distance(a: f64, b: f64) -> f64 {
    fold_half_open(a - b).abs()
}

/// Photon-class tag (n, m) of an in-zone representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhotonLabel {
    pub n: usize,
    pub m: i64,
    /// Continuation could not distinguish this state confidently.
    pub ambiguous: bool,
}

impl PhotonLabel {
    pub fn matches(&self, n: usize, m: i64) -> bool {
        self.n == n && self.m == m
    }
}

/// Folded quasienergies, eigenvectors, overlap labels and photon labels.
#[derive(Debug, Clone)]
pub struct FloquetSpectrum {
    /// ε/ħω in (-1/2, +1/2], one per state.
    pub eps_over_hw: Vec<f64>,
    /// Unit-circle Floquet multipliers.
    pub multipliers: Vec<C64>,
    /// Eigenvector columns, aligned with the state ordering.
    pub vectors: Array2<C64>,
    /// ℓ_max per state: basis index of maximal squared overlap.
    pub overlap_index: Vec<usize>,
    /// The maximal squared overlap itself.
    pub overlap_weight: Vec<f64>,
    /// Photon labels, present after a sweep labeling pass.
    pub labels: Option<Vec<PhotonLabel>>,
}

impl FloquetSpectrum {
    pub fn dim(&self) -> usize {
        self.eps_over_hw.len()
    }

    /// Index of the state currently carrying label (n, m), if any.
    pub fn find_label(&self, n: usize, m: i64) -> Option<usize> {
        self.labels
            .as_ref()?
            .iter()
            .position(|l| l.matches(n, m))
    }

    fn permute(&self, order: &[usize]) -> FloquetSpectrum {
        let dim = self.dim();
        let mut vectors = Array2::<C64>::zeros((self.vectors.nrows(), dim));
        for (dst, &src) in order.iter().enumerate() {
            vectors.column_mut(dst).assign(&self.vectors.column(src));
        }
        FloquetSpectrum {
            eps_over_hw: order.iter().map(|&i| self.eps_over_hw[i]).collect(),
            multipliers: order.iter().map(|&i| self.multipliers[i]).collect(),
            vectors,
            overlap_index: order.iter().map(|&i| self.overlap_index[i]).collect(),
            overlap_weight: order.iter().map(|&i| self.overlap_weight[i]).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| order.iter().map(|&i| l[i]).collect()),
        }
    }
}

/// Diagonalize a monodromy matrix into a folded spectrum.
///
/// Eigenvectors of near-degenerate multiplier clusters come out of a second
/// Hermitian stage and are orthonormal; ε/ħω = -arg(multiplier)/2π.
pub fn extract_quasienergies(m: &MonodromyMatrix) -> Result<FloquetSpectrum> {
    const CLUSTER_TOL: f64 = 1e-10;
    let dec = eig_unitary(&m.entries, CLUSTER_TOL)?;
    let n = m.dim();
    let eps: Vec<f64> = dec
        .multipliers
        .iter()
        .map(|mult| fold_half_open(-mult.arg() / std::f64::consts::TAU))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eps[i].partial_cmp(&eps[j]).unwrap());

    let mut vectors = Array2::<C64>::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        vectors.column_mut(dst).assign(&dec.vectors.column(src));
    }
    let eps_sorted: Vec<f64> = order.iter().map(|&i| eps[i]).collect();
    let mult_sorted: Vec<C64> = order.iter().map(|&i| dec.multipliers[i]).collect();

    let mut spectrum = FloquetSpectrum {
        eps_over_hw: eps_sorted,
        multipliers: mult_sorted,
        vectors,
        overlap_index: vec![0; n],
        overlap_weight: vec![0.0; n],
        labels: None,
    };
    refresh_overlaps(&mut spectrum, None);
    Ok(spectrum)
}

/// Recompute ℓ_max and its weight, against the standard basis or against the
/// columns of `reference`.
pub fn refresh_overlaps(spectrum: &mut FloquetSpectrum, reference: Option<&Array2<C64>>) {
    let weights = overlap_matrix(reference, &spectrum.vectors);
    let n_ref = weights.nrows();
    for j in 0..spectrum.dim() {
        let mut best = 0usize;
        let mut best_w = -1.0;
        for l in 0..n_ref {
            if weights[[l, j]] > best_w {
                best_w = weights[[l, j]];
                best = l;
            }
        }
        spectrum.overlap_index[j] = best;
        spectrum.overlap_weight[j] = best_w;
    }
}

/// Squared-overlap matrix |⟨ref_l | v_j⟩|²; `None` means the standard basis.
fn overlap_matrix(reference: Option<&Array2<C64>>, vectors: &Array2<C64>) -> Array2<f64> {
    match reference {
        None => vectors.mapv(|z| z.norm_sqr()),
        Some(r) => {
            let proj = linalg::matmul(&linalg::adjoint(r), vectors);
            proj.mapv(|z| z.norm_sqr())
        }
    }
}

/// Sort states by ℓ_max; ties go to the larger overlap, then the lower
/// original index (stable sort keeps it).
pub fn order_by_overlap(spectrum: &FloquetSpectrum) -> FloquetSpectrum {
    let mut order: Vec<usize> = (0..spectrum.dim()).collect();
    order.sort_by(|&i, &j| {
        spectrum.overlap_index[i]
            .cmp(&spectrum.overlap_index[j])
            .then(
                spectrum.overlap_weight[j]
                    .partial_cmp(&spectrum.overlap_weight[i])
                    .unwrap(),
            )
            .then(i.cmp(&j))
    });
    spectrum.permute(&order)
}

/// Options steering the labeling pass over a sweep.
#[derive(Debug, Clone, Copy)]
pub struct LabelOptions {
    /// Two squared overlaps closer than this flag the continuation.
    pub ambiguity_tol: f64,
    /// A winning squared overlap below this also flags the continuation.
    pub confidence: f64,
}

impl Default for LabelOptions {
    fn default() -> Self {
        Self {
            ambiguity_tol: 1e-3,
            confidence: 0.5,
        }
    }
}

/// Greedy bijective matching on a squared-overlap matrix O[prev, cur].
///
/// Returns, for every current state, the previous state it continues plus an
/// ambiguity flag.
fn match_states(weights: &Array2<f64>, opts: &LabelOptions) -> Vec<(usize, f64, bool)> {
    let n = weights.nrows();
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .collect();
    pairs.sort_by(|&(ia, ja), &(ib, jb)| {
        weights[[ib, jb]].partial_cmp(&weights[[ia, ja]]).unwrap()
    });
    let mut prev_taken = vec![false; n];
    let mut cur_assigned: Vec<Option<(usize, f64)>> = vec![None; n];
    let mut assigned = 0;
    for (i, j) in pairs {
        if assigned == n {
            break;
        }
        if prev_taken[i] || cur_assigned[j].is_some() {
            continue;
        }
        prev_taken[i] = true;
        cur_assigned[j] = Some((i, weights[[i, j]]));
        assigned += 1;
    }
    (0..n)
        .map(|j| {
            let (i, w) = cur_assigned[j].expect("square matching is total");
            // runner-up for the ambiguity check
            let mut second = 0.0f64;
            for ii in 0..n {
                if ii != i {
                    second = second.max(weights[[ii, j]]);
                }
            }
            let ambiguous = (w - second) < opts.ambiguity_tol || w < opts.confidence;
            (i, w, ambiguous)
        })
        .collect()
}

/// Assign (n, m) photon labels along an ordered sweep.
///
/// The first point must sit at zero (or negligible) drive: each state is
/// matched to the reference basis (columns of `reference`, or the standard
/// basis) whose unperturbed energies `energies_over_hw` fix the initial m by
/// folding. Later points continue labels by maximal eigenvector overlap with
/// the previous point; the m index follows the representative across zone
/// borders.
pub fn assign_photon_labels(
    points: &mut [FloquetSpectrum],
    energies_over_hw: &[f64],
    reference: Option<&Array2<C64>>,
    opts: &LabelOptions,
) -> Result<()> {
    if points.is_empty() {
        return Ok(());
    }
    let dim = points[0].dim();
    assert!(
        energies_over_hw.len() >= dim,
        "need an unperturbed energy per retained state"
    );

    // first point: match against the reference basis
    {
        let first = &mut points[0];
        let weights = overlap_matrix(reference, &first.vectors);
        let matches = match_states(&weights, opts);
        let labels: Vec<PhotonLabel> = matches
            .iter()
            .map(|&(l, _w, ambiguous)| {
                let e = energies_over_hw[l];
                let m = (fold_half_open(e) - e).round() as i64;
                PhotonLabel {
                    n: l,
                    m,
                    ambiguous,
                }
            })
            .collect();
        first.labels = Some(labels);
    }

    for idx in 1..points.len() {
        let (prev_slice, cur_slice) = points.split_at_mut(idx);
        let prev = &prev_slice[idx - 1];
        let cur = &mut cur_slice[0];
        let weights = overlap_matrix(Some(&prev.vectors), &cur.vectors);
        let matches = match_states(&weights, opts);
        let prev_labels = prev
            .labels
            .as_ref()
            .expect("previous sweep point is labeled");
        let labels: Vec<PhotonLabel> = (0..dim)
            .map(|j| {
                let (i, _w, ambiguous) = matches[j];
                let delta = cur.eps_over_hw[j] - prev.eps_over_hw[i];
                PhotonLabel {
                    n: prev_labels[i].n,
                    m: prev_labels[i].m + delta.round() as i64,
                    ambiguous: ambiguous || prev_labels[i].ambiguous,
                }
            })
            .collect();
        cur.labels = Some(labels);
    }
    Ok(())
}

/// Crossing-versus-anticrossing verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingClass {
    Crossing,
    Anticrossing,
}

/// Location and width of a close approach between two labeled states.
#[derive(Debug, Clone)]
pub struct AnticrossingReport {
    pub sweep_location: f64,
    /// δε/ħω at the minimum.
    pub gap_width: f64,
    pub pair: (PhotonLabel, PhotonLabel),
    pub classification: CrossingClass,
}

/// Default minimal-gap threshold separating a crossing from an anticrossing.
pub const CROSSING_THRESHOLD: f64 = 1e-9;

/// Gap above which two labels are considered to never approach.
pub const NO_APPROACH_GAP: f64 = 0.2;

/// Locate the minimal folded gap between the states labeled `a` and `b`
/// along a labeled sweep, refining with a local quadratic fit of gap².
pub fn scan_anticrossings(
    params: &[f64],
    points: &[FloquetSpectrum],
    a: (usize, i64),
    b: (usize, i64),
    crossing_threshold: f64,
) -> Result<AnticrossingReport> {
    assert_eq!(params.len(), points.len());
    let mut xs = Vec::new();
    let mut gaps = Vec::new();
    for (x, p) in params.iter().zip(points.iter()) {
        let (Some(ia), Some(ib)) = (p.find_label(a.0, a.1), p.find_label(b.0, b.1)) else {
            continue;
        };
        xs.push(*x);
        gaps.push(zone_distance(p.eps_over_hw[ia], p.eps_over_hw[ib]));
    }
    if xs.is_empty() {
        // report whichever label is missing everywhere
        let missing_a = points.iter().all(|p| p.find_label(a.0, a.1).is_none());
        let (n, m) = if missing_a { a } else { b };
        return Err(Error::LabelNotFound { n, m });
    }
    let i_min = gaps
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| x.partial_cmp(y).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    if gaps[i_min] > NO_APPROACH_GAP {
        return Err(Error::NoCloseApproach {
            min_gap: gaps[i_min],
        });
    }

    // quadratic fit of gap² through the three points around the minimum;
    // an ideal avoided crossing has gap² = g² + c²(x-x₀)², exactly parabolic
    let (location, gap_width) = if i_min == 0 || i_min + 1 == gaps.len() {
        (xs[i_min], gaps[i_min])
    } else {
        let (x0, x1, x2) = (xs[i_min - 1], xs[i_min], xs[i_min + 1]);
        let (y0, y1, y2) = (
            gaps[i_min - 1] * gaps[i_min - 1],
            gaps[i_min] * gaps[i_min],
            gaps[i_min + 1] * gaps[i_min + 1],
        );
        match parabola_vertex(x0, y0, x1, y1, x2, y2) {
            Some((xv, yv)) if xv >= x0 && xv <= x2 => (xv, yv.max(0.0).sqrt()),
            _ => (xs[i_min], gaps[i_min]),
        }
    };

    let p = &points[i_min];
    let la = p.labels.as_ref().unwrap()[p.find_label(a.0, a.1).unwrap()];
    let lb = p.labels.as_ref().unwrap()[p.find_label(b.0, b.1).unwrap()];
    let classification = if gap_width < crossing_threshold {
        CrossingClass::Crossing
    } else {
        CrossingClass::Anticrossing
    };
    Ok(AnticrossingReport {
        sweep_location: location,
        gap_width,
        pair: (la, lb),
        classification,
    })
}

/// Vertex of the parabola through three points, if it opens upward.
pub fn parabola_vertex(
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
) -> Option<(f64, f64)> {
    let d0 = (x0 - x1) * (x0 - x2);
    let d1 = (x1 - x0) * (x1 - x2);
    let d2 = (x2 - x0) * (x2 - x1);
    let a = y0 / d0 + y1 / d1 + y2 / d2;
    let b = -(y0 * (x1 + x2) / d0 + y1 * (x0 + x2) / d1 + y2 * (x0 + x1) / d2);
    if a <= 0.0 {
        return None;
    }
    let xv = -b / (2.0 * a);
    let c = y0 * x1 * x2 / d0 + y1 * x0 * x2 / d1 + y2 * x0 * x1 / d2;
    let yv = c - b * b / (4.0 * a);
    Some((xv, yv))
}

/// Expand a seeded random state in Floquet functions at τ = 0, propagate one
/// period and re-expand: returns max | |aₙ(T)| − |aₙ(0)| |.
pub fn verify_expansion_constancy(
    generator: &dyn Generator,
    cfg: &PropagatorConfig,
    monodromy: &MonodromyMatrix,
    seed: u64,
) -> Result<f64> {
    let spectrum = extract_quasienergies(monodromy)?;
    let dim = generator.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut psi: Array1<C64> = (0..dim)
        .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    psi.mapv_inplace(|z| z / norm);

    let coeff = |v: &Array1<C64>| -> Vec<f64> {
        (0..dim)
            .map(|n| {
                let col = spectrum.vectors.column(n);
                let a: C64 = col.iter().zip(v.iter()).map(|(u, p)| u.conj() * p).sum();
                a.norm()
            })
            .collect()
    };

    let before = coeff(&psi);
    let psi_mat = psi.clone().insert_axis(ndarray::Axis(1));
    let (out, _) = propagate(generator, &psi_mat, 0.0, generator.period(), cfg)?;
    let after = coeff(&out.column(0).to_owned());
    Ok(before
        .iter()
        .zip(after.iter())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_convention() {
        assert_eq!(fold_half_open(0.0), 0.0);
        assert_eq!(fold_half_open(0.5), 0.5);
        assert_eq!(fold_half_open(-0.5), 0.5);
        assert_eq!(fold_half_open(1.0), 0.0);
        assert!((fold_half_open(0.7) + 0.3).abs() < 1e-15);
        assert!((fold_half_open(-0.3) + 0.3).abs() < 1e-15);
        // idempotence and ħω-shift invariance on a grid
        let mut x = -3.0;
        while x <= 3.0 {
            let f = fold_half_open(x);
            assert!(f > -0.5 && f <= 0.5);
            assert_eq!(fold_half_open(f), f);
            assert!((fold_half_open(x + 1.0) - f).abs() < 1e-12);
            x += 0.0837;
        }
    }

    #[test]
    fn parabola_vertex_exact() {
        // y = 2(x-3)² + 5
        let f = |x: f64| 2.0 * (x - 3.0).powi(2) + 5.0;
        let (xv, yv) = parabola_vertex(1.0, f(1.0), 2.5, f(2.5), 4.0, f(4.0)).unwrap();
        assert!((xv - 3.0).abs() < 1e-12);
        assert!((yv - 5.0).abs() < 1e-12);
    }

    #[test]
    fn zone_distance_wraps() {
        assert!((zone_distance(0.49, -0.49) - 0.02).abs() < 1e-12);
        assert!((zone_distance(0.2, -0.1) - 0.3).abs() < 1e-12);
    }
}
