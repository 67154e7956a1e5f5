//! The bivariate 36-vertex R-matrix, its rational limit, and residual checks
//! for the Yang-Baxter equation, regularity, unitarity and invariance.
//!
//! All residuals are max-abs-entry norms.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intertwine::{check_pair, r_from_projectors_with, FusionOptions};
use crate::qdeform::{sqrt_product, QParams, ReprLabel, UnitarityClass};
use crate::repr::{coproduct_action, GeneratorLabel};
use crate::superlinalg::{graded_tensor, GradedOperator, GradedSpace, UnitTensorSum};

/// Entries below this magnitude are treated as structural zeros by the census.
pub const CENSUS_THRESHOLD: f64 = 1e-13;

/// Deformation parameter used for coproducts when testing the rational R.
pub const RATIONAL_PROBE_Q: f64 = 1.0 + 1e-6;

/// Two spectral parameters (representation labels) and the deformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPair {
    alpha: ReprLabel,
    beta: ReprLabel,
    params: QParams,
}

impl SpectralPair {
    pub fn new(alpha: f64, beta: f64, params: QParams) -> Result<Self> {
        Self::from_labels(ReprLabel::new(alpha)?, ReprLabel::new(beta)?, params, false)
    }

    pub fn from_labels(alpha: ReprLabel, beta: ReprLabel, params: QParams, allow_mixed_class: bool) -> Result<Self> {
        if alpha.class() != beta.class() && !allow_mixed_class {
            return Err(Error::MixedClass(alpha.alpha(), beta.alpha()));
        }
        Ok(Self { alpha, beta, params })
    }

    pub fn alpha(&self) -> ReprLabel {
        self.alpha
    }

    pub fn beta(&self) -> ReprLabel {
        self.beta
    }

    pub fn params(&self) -> QParams {
        self.params
    }

    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
            params: self.params,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Construction {
    ClosedForm,
    ProjectorSum,
    Rational,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::ClosedForm => "closed",
            Construction::ProjectorSum => "projector",
            Construction::Rational => "rational",
        }
    }
}

/// `R(alpha, beta)` on `V(alpha) (x) V(beta)`; `params` is `None` for the
/// rational matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix {
    op: GradedOperator,
    alpha: ReprLabel,
    beta: ReprLabel,
    params: Option<QParams>,
    construction: Construction,
}

impl RMatrix {
    pub fn op(&self) -> &GradedOperator {
        &self.op
    }

    pub fn alpha(&self) -> ReprLabel {
        self.alpha
    }

    pub fn beta(&self) -> ReprLabel {
        self.beta
    }

    pub fn params(&self) -> Option<QParams> {
        self.params
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn r_closed_form(pair: SpectralPair) -> Result<RMatrix> {
    r_closed_form_with(pair, FusionOptions::default())
}

pub fn r_closed_form_with(pair: SpectralPair, opts: FusionOptions) -> Result<RMatrix> {
    let opts = FusionOptions {
        allow_mixed_class: true,
        ..opts
    };
    check_pair(pair.alpha, pair.beta, pair.params, opts)?;
    let (a, b, p) = (pair.alpha.alpha(), pair.beta.alpha(), pair.params);
    let q = |x: f64| p.pow(x);
    let n = |x: f64| p.number(x);
    let sp = |xs: &[f64]| sqrt_product(&xs.iter().map(|&x| n(x)).collect::<Vec<_>>());
    let s = a + b;
    let f = q(s + 1.0) + q(-s - 1.0) + q(1.0) + q(-1.0);
    let d = n(s) * n(s + 2.0);
    let h = n((a - b) / 2.0);

    let mut r = UnitTensorSum::new();
    r.add_all(re(1.0), &[((1, 1), (1, 1)), ((2, 2), (2, 2)), ((3, 3), (3, 3)), ((4, 4), (4, 4))]);
    r.add_all(
        (q(s / 2.0) + q(-s / 2.0)) * sp(&[a, b]) / n(s),
        &[((2, 2), (1, 1)), ((1, 1), (2, 2)), ((3, 3), (1, 1)), ((1, 1), (3, 3))],
    );
    r.add_all(
        f * sp(&[a, b, a + 1.0, b + 1.0]) / d,
        &[((4, 4), (1, 1)), ((1, 1), (4, 4))],
    );
    r.add(
        re((f * n(a) * n(b) + (q(s + 2.0) + 1.0) * n(s)) / d / q(1.0)),
        (2, 2),
        (3, 3),
    );
    r.add(
        re(q(1.0) * (f * n(a) * n(b) + (q(-s - 2.0) + 1.0) * n(s)) / d),
        (3, 3),
        (2, 2),
    );
    r.add_all(
        (q(-(s + 2.0) / 2.0) + q((s + 2.0) / 2.0)) * sp(&[a + 1.0, b + 1.0]) / n(s + 2.0),
        &[((4, 4), (2, 2)), ((2, 2), (4, 4)), ((4, 4), (3, 3)), ((3, 3), (4, 4))],
    );
    r.add_all(
        re((n(b) - n(a)) / n(s)),
        &[((2, 1), (1, 2)), ((1, 2), (2, 1)), ((3, 1), (1, 3)), ((1, 3), (3, 1))],
    );
    r.add(re(f * h / d * n((a - b - 2.0) / 2.0)), (4, 1), (1, 4));
    r.add(re(f * h / d * n((a - b + 2.0) / 2.0)), (1, 4), (4, 1));
    r.add_all(re(f * h / d * h), &[((2, 3), (3, 2)), ((3, 2), (2, 3))]);
    r.add_all(
        re((n(b + 1.0) - n(a + 1.0)) / n(s + 2.0)),
        &[((4, 2), (2, 4)), ((2, 4), (4, 2)), ((4, 3), (3, 4)), ((3, 4), (4, 3))],
    );
    let c1 = f * h * sp(&[a, b + 1.0]) / d;
    r.add_all(c1 * q(-0.5), &[((4, 2), (1, 3))]);
    r.add_all(-c1 * q(-0.5), &[((2, 1), (3, 4))]);
    r.add_all(c1 * q(0.5), &[((3, 1), (2, 4))]);
    r.add_all(-c1 * q(0.5), &[((4, 3), (1, 2))]);
    let c2 = f * h * sp(&[a + 1.0, b]) / d;
    r.add_all(c2 * q(-0.5), &[((2, 4), (3, 1))]);
    r.add_all(-c2 * q(-0.5), &[((1, 2), (4, 3))]);
    r.add_all(c2 * q(0.5), &[((1, 3), (4, 2))]);
    r.add_all(-c2 * q(0.5), &[((3, 4), (2, 1))]);

    Ok(RMatrix {
        op: r.into_operator(),
        alpha: pair.alpha,
        beta: pair.beta,
        params: Some(p),
        construction: Construction::ClosedForm,
    })
}

/// `P1 + P2 + P3` from the symmetry-adapted bases.
pub fn r_projector_sum(pair: SpectralPair) -> Result<RMatrix> {
    let opts = FusionOptions {
        allow_mixed_class: true,
        ..FusionOptions::default()
    };
    Ok(RMatrix {
        op: r_from_projectors_with(pair.alpha, pair.beta, pair.params, opts)?,
        alpha: pair.alpha,
        beta: pair.beta,
        params: Some(pair.params),
        construction: Construction::ProjectorSum,
    })
}

/// The `q -> 1` limit of the closed form. Square roots of products are split
/// into principal roots of the factors, as in the trigonometric case.
pub fn r_rational(alpha: f64, beta: f64) -> Result<RMatrix> {
    r_rational_labels(ReprLabel::new(alpha)?, ReprLabel::new(beta)?)
}

pub fn r_rational_labels(alpha: ReprLabel, beta: ReprLabel) -> Result<RMatrix> {
    if alpha.class() != beta.class() {
        return Err(Error::MixedClass(alpha.alpha(), beta.alpha()));
    }
    let (a, b) = (alpha.alpha(), beta.alpha());
    let s = a + b;
    let floor = FusionOptions::default().floor;
    for (label, value) in [("alpha+beta", s), ("alpha+beta+2", s + 2.0)] {
        if value.is_nan() || value.abs() < floor {
            return Err(Error::SingularFusion { label, value, floor });
        }
    }
    let d = s * (s + 2.0);

    let mut r = UnitTensorSum::new();
    r.add_all(re(1.0), &[((1, 1), (1, 1)), ((2, 2), (2, 2)), ((3, 3), (3, 3)), ((4, 4), (4, 4))]);
    r.add_all(
        2.0 * sqrt_product(&[a, b]) / s,
        &[((2, 2), (1, 1)), ((1, 1), (2, 2)), ((3, 3), (1, 1)), ((1, 1), (3, 3))],
    );
    r.add_all(
        4.0 * sqrt_product(&[a, b, a + 1.0, b + 1.0]) / d,
        &[((4, 4), (1, 1)), ((1, 1), (4, 4))],
    );
    r.add_all(re(2.0 * (a + 2.0 * a * b + b) / d), &[((2, 2), (3, 3)), ((3, 3), (2, 2))]);
    r.add_all(
        2.0 * sqrt_product(&[a + 1.0, b + 1.0]) / (s + 2.0),
        &[((4, 4), (2, 2)), ((2, 2), (4, 4)), ((4, 4), (3, 3)), ((3, 3), (4, 4))],
    );
    r.add_all(
        re((b - a) / s),
        &[((2, 1), (1, 2)), ((1, 2), (2, 1)), ((3, 1), (1, 3)), ((1, 3), (3, 1))],
    );
    r.add(re((a - b) / d * (a - b - 2.0)), (4, 1), (1, 4));
    r.add(re((a - b) / d * (a - b + 2.0)), (1, 4), (4, 1));
    r.add_all(re((a - b) / d * (a - b)), &[((2, 3), (3, 2)), ((3, 2), (2, 3))]);
    r.add_all(
        re((b - a) / (s + 2.0)),
        &[((4, 2), (2, 4)), ((2, 4), (4, 2)), ((4, 3), (3, 4)), ((3, 4), (4, 3))],
    );
    let c1 = 2.0 * (a - b) * sqrt_product(&[a, b + 1.0]) / d;
    r.add_all(c1, &[((4, 2), (1, 3)), ((3, 1), (2, 4))]);
    r.add_all(-c1, &[((2, 1), (3, 4)), ((4, 3), (1, 2))]);
    let c2 = 2.0 * (a - b) * sqrt_product(&[a + 1.0, b]) / d;
    r.add_all(c2, &[((2, 4), (3, 1)), ((1, 3), (4, 2))]);
    r.add_all(-c2, &[((1, 2), (4, 3)), ((3, 4), (2, 1))]);

    Ok(RMatrix {
        op: r.into_operator(),
        alpha,
        beta,
        params: None,
        construction: Construction::Rational,
    })
}

/// Builds `R(alpha, beta)` with the selected construction. `params` is
/// ignored by the rational construction.
pub fn build_r(construction: Construction, alpha: ReprLabel, beta: ReprLabel, params: QParams) -> Result<RMatrix> {
    match construction {
        Construction::ClosedForm => r_closed_form(SpectralPair::from_labels(alpha, beta, params, false)?),
        Construction::ProjectorSum => r_projector_sum(SpectralPair::from_labels(alpha, beta, params, false)?),
        Construction::Rational => r_rational_labels(alpha, beta),
    }
}

/// Residual of
/// `(I(x)R(a,b)) (R(a,c)(x)I) (I(x)R(b,c)) = (R(b,c)(x)I) (I(x)R(a,c)) (R(a,b)(x)I)`
/// on `V (x) V (x) V`.
pub fn check_qybe(construction: Construction, alpha: f64, beta: f64, gamma: f64, params: QParams) -> Result<f64> {
    let (a, b, c) = (ReprLabel::new(alpha)?, ReprLabel::new(beta)?, ReprLabel::new(gamma)?);
    let r_ab = build_r(construction, a, b, params)?;
    let r_ac = build_r(construction, a, c, params)?;
    let r_bc = build_r(construction, b, c, params)?;
    let id = GradedOperator::identity(&GradedSpace::fundamental());
    let left = |r: &RMatrix| graded_tensor(r.op(), &id);
    let right = |r: &RMatrix| graded_tensor(&id, r.op());
    let lhs = &(&right(&r_ab)? * &left(&r_ac)?) * &right(&r_bc)?;
    let rhs = &(&left(&r_bc)? * &right(&r_ac)?) * &left(&r_ab)?;
    Ok(lhs.max_abs_diff(&rhs))
}

/// `(|R(a,a) - I|, |R(a,b) R(b,a) - I|)`.
pub fn check_regularity_unitarity(pair: SpectralPair) -> Result<(f64, f64)> {
    check_regularity_unitarity_with(Construction::ClosedForm, pair)
}

pub fn check_regularity_unitarity_with(construction: Construction, pair: SpectralPair) -> Result<(f64, f64)> {
    let id = GradedOperator::identity(&GradedSpace::fundamental().power(2));
    let (a, b, p) = (pair.alpha, pair.beta, pair.params);
    let reg = build_r(construction, a, a, p)?.op().max_abs_diff(&id);
    let r_ab = build_r(construction, a, b, p)?;
    let r_ba = build_r(construction, b, a, p)?;
    let uni = (r_ab.op() * r_ba.op()).max_abs_diff(&id);
    Ok((reg, uni))
}

/// Per-generator residuals of `R(a,b) Delta^{ab}(g) - Delta^{ba}(g) R(a,b)`.
///
/// The coproduct on the left acts on `V(beta) (x) V(alpha)`, the target space of
/// `R(a,b)`.
///
/// The rational matrix is tested against the undeformed coproduct. Since
/// `q = 1` is excluded from [`QParams`], the commutator is evaluated at
/// `q = 1 + eps` and `q = 1 + 2 eps` with `eps = RATIONAL_PROBE_Q - 1`, and
/// extrapolated linearly to `eps = 0`. Without that step the first-order
/// deformation of the coproduct leaves a residual proportional to `eps`.
pub fn invariance_residuals(r: &RMatrix) -> Result<Vec<(GeneratorLabel, f64)>> {
    let commutator = |g: GeneratorLabel, p: QParams| {
        let lhs = r.op() * &coproduct_action(g, r.alpha, r.beta, p);
        let rhs = &coproduct_action(g, r.beta, r.alpha, p) * r.op();
        &lhs - &rhs
    };
    match r.params {
        Some(p) => Ok(GeneratorLabel::ALL
            .iter()
            .map(|&g| (g, commutator(g, p).max_abs()))
            .collect()),
        None => {
            let eps = RATIONAL_PROBE_Q - 1.0;
            let (p1, p2) = (QParams::new(1.0 + eps)?, QParams::new(1.0 + 2.0 * eps)?);
            Ok(GeneratorLabel::ALL
                .iter()
                .map(|&g| {
                    let c0 = &commutator(g, p1).scale(Complex64::new(2.0, 0.0)) - &commutator(g, p2);
                    (g, c0.max_abs())
                })
                .collect())
        }
    }
}

/// Invariance residual of the rational matrix against coproducts at
/// [`RATIONAL_PROBE_Q`] without extrapolation.
pub fn rational_invariance_raw(r: &RMatrix) -> Result<f64> {
    let p = QParams::new(RATIONAL_PROBE_Q)?;
    Ok(GeneratorLabel::ALL
        .iter()
        .map(|&g| {
            let lhs = r.op() * &coproduct_action(g, r.alpha, r.beta, p);
            let rhs = &coproduct_action(g, r.beta, r.alpha, p) * r.op();
            lhs.max_abs_diff(&rhs)
        })
        .fold(0.0, f64::max))
}

pub fn check_invariance(r: &RMatrix) -> Result<f64> {
    Ok(invariance_residuals(r)?
        .into_iter()
        .map(|(_, x)| x)
        .fold(0.0, f64::max))
}

/// `(E11, E22, E33 - alpha)` weight of basis vector `i` (0-based) of `V(alpha)`.
fn weight(i: usize) -> [i32; 3] {
    match i {
        0 => [0, 0, 0],
        1 => [0, -1, 1],
        2 => [-1, 0, 1],
        _ => [-1, -1, 2],
    }
}

/// Largest entry of `r` connecting basis states of different total weight.
/// Zero means weight conservation holds exactly.
pub fn weight_violation(r: &GradedOperator) -> f64 {
    let total = |x: usize| {
        let (u, v) = (weight(x / 4), weight(x % 4));
        [u[0] + v[0], u[1] + v[1], u[2] + v[2]]
    };
    let m = r.matrix();
    let mut worst: f64 = 0.0;
    for row in 0..m.nrows() {
        for col in 0..m.ncols() {
            if total(row) != total(col) {
                worst = worst.max(m[(row, col)].norm());
            }
        }
    }
    worst
}

/// Number of entries with magnitude above [`CENSUS_THRESHOLD`].
pub fn vertex_census(r: &RMatrix) -> usize {
    r.op().matrix().iter().filter(|z| z.norm() > CENSUS_THRESHOLD).count()
}

/// One random parameter point for the randomized suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Draw {
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Name of the pseudo-random generator behind [`sample_draws`].
pub const GENERATOR: &str = "ChaCha8Rng";

pub const Q_RANGE: (f64, f64) = (1.05, 3.0);
pub const TYPE_I_RANGE: (f64, f64) = (0.1, 5.0);
pub const TYPE_II_RANGE: (f64, f64) = (-6.0, -1.1);

/// `count` draws with all three labels in the window of `class`. The stream
/// for each window is derived from `seed` so the two windows are independent.
pub fn sample_draws(seed: u64, count: usize, class: UnitarityClass) -> Vec<Draw> {
    let (stream, (lo, hi)) = match class {
        UnitarityClass::TypeI => (0u64, TYPE_I_RANGE),
        UnitarityClass::TypeII => (1u64, TYPE_II_RANGE),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..count)
        .map(|_| Draw {
            q: rng.random_range(Q_RANGE.0..Q_RANGE.1),
            alpha: rng.random_range(lo..hi),
            beta: rng.random_range(lo..hi),
            gamma: rng.random_range(lo..hi),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superlinalg::{max_abs_diff, CMatrix};

    fn qp(q: f64) -> QParams {
        QParams::new(q).unwrap()
    }

    fn pair(a: f64, b: f64, q: f64) -> SpectralPair {
        SpectralPair::new(a, b, qp(q)).unwrap()
    }

    /// Entry of `e_ij (x) e_kl` in a 16x16 matrix, ignoring the Koszul sign.
    fn entry(r: &RMatrix, (i, j): (usize, usize), (k, l): (usize, usize)) -> Complex64 {
        r.op().matrix()[((i - 1) * 4 + (k - 1), (j - 1) * 4 + (l - 1))]
    }

    #[test]
    fn closed_form_examples() {
        let p = qp(1.3);
        let r = r_closed_form(pair(0.7, 1.9, 1.3)).unwrap();
        assert_eq!(entry(&r, (1, 1), (1, 1)), re(1.0));
        // e21 (x) e12: column state |1> is even, no sign
        let expected = (p.number(1.9) - p.number(0.7)) / p.number(2.6);
        assert!((entry(&r, (2, 1), (1, 2)) - expected).norm() < 1e-14);
        let r = r_closed_form(pair(0.7, 0.7, 1.3)).unwrap();
        assert_eq!(entry(&r, (2, 1), (1, 2)).norm(), 0.0);
    }

    #[test]
    fn closed_form_equals_projector_sum() {
        for (a, b, q) in [(0.7, 1.9, 1.3), (-2.1, -3.4, 1.2), (4.2, 0.15, 2.9), (-1.2, -5.8, 1.06)] {
            let c = r_closed_form(pair(a, b, q)).unwrap();
            let s = r_projector_sum(pair(a, b, q)).unwrap();
            assert!(c.op().max_abs_diff(s.op()) < 1e-10, "{a} {b} {q}");
        }
    }

    #[test]
    fn rational_examples() {
        let r = r_rational(0.7, 1.9).unwrap();
        let expected = 2.0 * (0.7f64 * 1.9).sqrt() / 2.6;
        assert!((entry(&r, (2, 2), (1, 1)) - expected).norm() < 1e-15);
        let id = CMatrix::identity(16, 16);
        assert!(max_abs_diff(r_rational(0.7, 0.7).unwrap().op().matrix(), &id) < 1e-15);
        assert!(max_abs_diff(r_rational(-2.3, -2.3).unwrap().op().matrix(), &id) < 1e-15);
        assert!(matches!(r_rational(0.7, -1.9), Err(Error::MixedClass(..))));
    }

    #[test]
    fn rational_is_the_q_to_one_limit() {
        for (a, b) in [(0.7, 1.9), (-2.1, -3.4)] {
            let c = r_closed_form(pair(a, b, RATIONAL_PROBE_Q)).unwrap();
            let r = r_rational(a, b).unwrap();
            assert!(c.op().max_abs_diff(r.op()) < 1e-4);
        }
    }

    #[test]
    fn qybe_examples() {
        for c in [Construction::ClosedForm, Construction::ProjectorSum, Construction::Rational] {
            // every factor is the identity up to rounding
            assert!(check_qybe(c, 0.7, 0.7, 0.7, qp(1.3)).unwrap() < 1e-14);
            assert!(check_qybe(c, 0.7, 1.9, 0.4, qp(1.3)).unwrap() < 1e-10);
            assert!(check_qybe(c, -2.1, -3.4, -1.7, qp(1.2)).unwrap() < 1e-10);
        }
    }

    #[test]
    fn regularity_and_unitarity() {
        let (reg, uni) = check_regularity_unitarity(pair(0.7, 1.9, 1.3)).unwrap();
        assert!(reg < 1e-12 && uni < 1e-10);
        let (reg2, uni2) = check_regularity_unitarity(pair(1.9, 0.7, 1.3)).unwrap();
        assert!(reg2 < 1e-12);
        assert!((uni - uni2).abs() < 1e-12);
        let (reg, uni) = check_regularity_unitarity(pair(-2.1, -3.4, 1.2)).unwrap();
        assert!(reg < 1e-12 && uni < 1e-10);
    }

    #[test]
    fn invariance() {
        let r = r_closed_form(pair(0.7, 1.9, 1.3)).unwrap();
        assert!(check_invariance(&r).unwrap() < 1e-10);
        let r = r_closed_form(pair(-2.1, -3.4, 1.2)).unwrap();
        assert!(check_invariance(&r).unwrap() < 1e-10);
        let r = r_closed_form(pair(0.7, 0.7, 1.3)).unwrap();
        for (g, res) in invariance_residuals(&r).unwrap() {
            if g.is_cartan() {
                assert_eq!(res, 0.0);
            }
        }
        for (a, b) in [(0.7, 1.9), (-2.1, -3.4)] {
            let r = r_rational(a, b).unwrap();
            assert!(check_invariance(&r).unwrap() < 1e-8);
            // the bare deformed coproduct misses by a term linear in q - 1
            let raw = rational_invariance_raw(&r).unwrap();
            assert!(raw > 1e-8 && raw < 1e-5);
        }
    }

    #[test]
    fn weight_conservation_is_exact() {
        for r in [
            r_closed_form(pair(0.7, 1.9, 1.3)).unwrap(),
            r_projector_sum(pair(-2.1, -3.4, 1.2)).unwrap(),
            r_rational(0.7, 1.9).unwrap(),
        ] {
            assert_eq!(weight_violation(r.op()), 0.0);
        }
    }

    #[test]
    fn census() {
        assert_eq!(vertex_census(&r_closed_form(pair(0.7, 1.9, 1.3)).unwrap()), 36);
        assert_eq!(vertex_census(&r_closed_form(pair(-2.1, -3.4, 1.2)).unwrap()), 36);
        assert_eq!(vertex_census(&r_closed_form(pair(0.7, 0.7, 1.3)).unwrap()), 16);
        assert_eq!(vertex_census(&r_rational(0.7, 1.9).unwrap()), 36);
    }

    #[test]
    fn entries_are_real() {
        for (a, b, q) in [(0.7, 1.9, 1.3), (-2.1, -3.4, 1.2)] {
            assert!(r_closed_form(pair(a, b, q)).unwrap().op().max_imag() < 1e-12);
            assert!(r_projector_sum(pair(a, b, q)).unwrap().op().max_imag() < 1e-12);
            assert!(r_rational(a, b).unwrap().op().max_imag() < 1e-12);
        }
    }

    #[test]
    fn draws_are_seeded_and_in_range() {
        let d1 = sample_draws(7, 20, UnitarityClass::TypeII);
        assert_eq!(d1, sample_draws(7, 20, UnitarityClass::TypeII));
        assert_ne!(d1, sample_draws(8, 20, UnitarityClass::TypeII));
        for d in d1 {
            assert!((1.05..3.0).contains(&d.q));
            assert!([d.alpha, d.beta, d.gamma].iter().all(|x| (-6.0..-1.1).contains(x)));
        }
    }
}
