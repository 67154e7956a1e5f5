//! Symmetry-adapted bases of `V(0,0|alpha) (x) V(0,0|beta) = V1 + V2 + V3`
//! and the elementary intertwiners built from them.
//!
//! The basis vectors are written out exactly as closed expressions in q-numbers;
//! no Gram-Schmidt step is applied. Their orthonormality is a checked property.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qdeform::{principal_sqrt, sqrt_product, QParams, ReprLabel};
use crate::superlinalg::{
    graded_adjoint, outer, sum_ops, CMatrix, GradedOperator, GradedSpace, GradedVector,
};

/// Irreducible summand of the two-fold tensor product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FusionLabel {
    /// `V(0,0|alpha+beta)`, dimension 4.
    V1,
    /// `V(0,-1|alpha+beta+1)`, dimension 8.
    V2,
    /// `V(-1,-1|alpha+beta+2)`, dimension 4.
    V3,
}

impl FusionLabel {
    pub const ALL: [FusionLabel; 3] = [FusionLabel::V1, FusionLabel::V2, FusionLabel::V3];

    pub fn dim(self) -> usize {
        match self {
            FusionLabel::V1 | FusionLabel::V3 => 4,
            FusionLabel::V2 => 8,
        }
    }

    /// Highest weight `(a, b | c)` of the summand for labels `alpha`, `beta`.
    pub fn highest_weight(self, alpha: f64, beta: f64) -> (f64, f64, f64) {
        let s = alpha + beta;
        match self {
            FusionLabel::V1 => (0.0, 0.0, s),
            FusionLabel::V2 => (0.0, -1.0, s + 1.0),
            FusionLabel::V3 => (-1.0, -1.0, s + 2.0),
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionOptions {
    /// Smallest admissible `|[alpha+beta+k]_q|`, `k = 0, 1, 2`.
    pub floor: f64,
    /// Accept one type I and one type II label.
    pub allow_mixed_class: bool,
}

impl Default for FusionOptions {
    fn default() -> Self {
        Self {
            floor: 1e-8,
            allow_mixed_class: false,
        }
    }
}

/// The sixteen vectors `|Psi^k_i>` spanning `V1`, `V2`, `V3` inside
/// `V(alpha) (x) V(beta)`, in the order `Psi^1_1..4, Psi^2_1..8, Psi^3_1..4`.
#[derive(Debug, Clone)]
pub struct SymmetryBasis {
    alpha: ReprLabel,
    beta: ReprLabel,
    params: QParams,
    vectors: [Vec<GradedVector>; 3],
}

pub(crate) fn check_pair(alpha: ReprLabel, beta: ReprLabel, params: QParams, opts: FusionOptions) -> Result<()> {
    if alpha.class() != beta.class() && !opts.allow_mixed_class {
        return Err(Error::MixedClass(alpha.alpha(), beta.alpha()));
    }
    let s = alpha.alpha() + beta.alpha();
    for (label, shift) in [("alpha+beta", 0.0), ("alpha+beta+1", 1.0), ("alpha+beta+2", 2.0)] {
        let value = params.number(s + shift);
        if value.is_nan() || value.abs() < opts.floor {
            return Err(Error::SingularFusion {
                label,
                value,
                floor: opts.floor,
            });
        }
    }
    Ok(())
}

/// Accumulates `sum c_ij |i> (x) |j>` with 1-based ket labels.
struct KetBuilder {
    v: GradedVector,
}

impl KetBuilder {
    fn new() -> Self {
        let f = GradedSpace::fundamental();
        Self {
            v: GradedVector::zeros(&f.tensor(&f)),
        }
    }

    fn term(mut self, c: Complex64, i: usize, j: usize) -> Self {
        self.v.add_basis((i - 1) * 4 + (j - 1), c);
        self
    }

    fn over(self, norm: Complex64) -> GradedVector {
        self.v.scale(norm.inv())
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl SymmetryBasis {
    pub fn new(alpha: ReprLabel, beta: ReprLabel, params: QParams, opts: FusionOptions) -> Result<Self> {
        check_pair(alpha, beta, params, opts)?;
        let (a, b) = (alpha.alpha(), beta.alpha());
        let q = |x: f64| params.pow(x);
        let n = |x: f64| params.number(x);
        let s = |x: f64| principal_sqrt(n(x));
        let sp = |xs: &[f64]| sqrt_product(&xs.iter().map(|&x| n(x)).collect::<Vec<_>>());
        let ket = |i, j| KetBuilder::new().term(re(1.0), i, j);

        let d0 = s(a + b);
        let d2 = s(a + b + 2.0);
        let d01 = sp(&[a + b, a + b + 1.0]);
        let d12 = sp(&[a + b + 1.0, a + b + 2.0]);

        let v1 = vec![
            ket(1, 1).over(re(1.0)),
            KetBuilder::new()
                .term(q(-b / 2.0) * s(a), 2, 1)
                .term(q(a / 2.0) * s(b), 1, 2)
                .over(d0),
            KetBuilder::new()
                .term(q(-b / 2.0) * s(a), 3, 1)
                .term(q(a / 2.0) * s(b), 1, 3)
                .over(d0),
            KetBuilder::new()
                .term(q(-b) * sp(&[a, a + 1.0]), 4, 1)
                .term(q(a) * sp(&[b, b + 1.0]), 1, 4)
                .term(q((a - b - 1.0) / 2.0) * sp(&[a, b]), 2, 3)
                .term(-q((a - b + 1.0) / 2.0) * sp(&[a, b]), 3, 2)
                .over(d01),
        ];

        let v2 = vec![
            KetBuilder::new()
                .term(q(a / 2.0) * s(b), 2, 1)
                .term(-q(-b / 2.0) * s(a), 1, 2)
                .over(d0),
            KetBuilder::new()
                .term(q(a / 2.0) * s(b), 3, 1)
                .term(-q(-b / 2.0) * s(a), 1, 3)
                .over(d0),
            KetBuilder::new()
                .term(q((a - b) / 2.0) * sp(&[a + 1.0, b]), 4, 1)
                .term(-q((a - b) / 2.0) * sp(&[a, b + 1.0]), 1, 4)
                .term(re(-q(-b - 0.5) * n(a)), 2, 3)
                .term(re(-q(a + 0.5) * n(b)), 3, 2)
                .over(d01),
            ket(3, 3).over(re(1.0)),
            KetBuilder::new()
                .term(q(-(b + 1.0) / 2.0) * s(a + 1.0), 4, 3)
                .term(-q((a + 1.0) / 2.0) * s(b + 1.0), 3, 4)
                .over(d2),
            KetBuilder::new()
                .term(q(-(b + 1.0) / 2.0) * s(a + 1.0), 4, 2)
                .term(-q((a + 1.0) / 2.0) * s(b + 1.0), 2, 4)
                .over(d2),
            KetBuilder::new()
                .term(q((a - b) / 2.0) * sp(&[a + 1.0, b]), 4, 1)
                .term(-q((a - b) / 2.0) * sp(&[b + 1.0, a]), 1, 4)
                .term(re(q(a + 0.5) * n(b + 1.0)), 2, 3)
                .term(re(q(-(b + 0.5)) * n(a + 1.0)), 3, 2)
                .over(d12),
            ket(2, 2).over(re(1.0)),
        ];

        let v3 = vec![
            KetBuilder::new()
                .term(q((a - b + 1.0) / 2.0) * sp(&[b + 1.0, a + 1.0]), 3, 2)
                .term(-q(-(b - a + 1.0) / 2.0) * sp(&[a + 1.0, b + 1.0]), 2, 3)
                .term(q(a + 1.0) * sp(&[b + 1.0, b]), 4, 1)
                .term(q(-b - 1.0) * sp(&[a + 1.0, a]), 1, 4)
                .over(d12),
            KetBuilder::new()
                .term(q((a + 1.0) / 2.0) * s(b + 1.0), 4, 2)
                .term(q(-(b + 1.0) / 2.0) * s(a + 1.0), 2, 4)
                .over(d2),
            KetBuilder::new()
                .term(q((a + 1.0) / 2.0) * s(b + 1.0), 4, 3)
                .term(q(-(b + 1.0) / 2.0) * s(a + 1.0), 3, 4)
                .over(d2),
            ket(4, 4).over(re(1.0)),
        ];

        Ok(Self {
            alpha,
            beta,
            params,
            vectors: [v1, v2, v3],
        })
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

    pub fn vectors(&self, mu: FusionLabel) -> &[GradedVector] {
        &self.vectors[mu.slot()]
    }

    /// `|Psi^k_i>` with 1-based `k`, `i`.
    pub fn psi(&self, k: usize, i: usize) -> &GradedVector {
        &self.vectors[k - 1][i - 1]
    }

    pub fn all(&self) -> impl Iterator<Item = &GradedVector> {
        self.vectors.iter().flatten()
    }

    /// `G_mn = <Psi_m | Psi_n>` with duals from the graded adjoint.
    pub fn gram_matrix(&self) -> CMatrix {
        let f = GradedSpace::fundamental();
        let all: Vec<&GradedVector> = self.all().collect();
        CMatrix::from_fn(all.len(), all.len(), |m, n| {
            graded_adjoint(all[m], &f, &f)
                .expect("basis vectors live on V (x) V")
                .pair(all[n])
        })
    }

    /// `sum_i |Psi^mu_i><Psi^mu_i|` on `V(alpha) (x) V(beta)`.
    pub fn projector(&self, mu: FusionLabel) -> GradedOperator {
        outer_sum(self.vectors(mu), self.vectors(mu))
    }
}

pub fn build_symmetry_basis(
    alpha: ReprLabel,
    beta: ReprLabel,
    params: QParams,
    opts: FusionOptions,
) -> Result<SymmetryBasis> {
    SymmetryBasis::new(alpha, beta, params, opts)
}

fn outer_sum(kets: &[GradedVector], bras: &[GradedVector]) -> GradedOperator {
    let f = GradedSpace::fundamental();
    let ff = f.tensor(&f);
    let terms: Vec<GradedOperator> = kets
        .iter()
        .zip(bras)
        .map(|(k, b)| outer(k, &graded_adjoint(b, &f, &f).expect("basis vectors live on V (x) V")))
        .collect();
    sum_ops(&ff, &terms)
}

/// `P^{alpha beta}_mu = sum_i |e^mu_i>_{beta (x) alpha} <e^mu_i|_{alpha (x) beta}`.
pub fn elementary_intertwiner(
    mu: FusionLabel,
    alpha: ReprLabel,
    beta: ReprLabel,
    params: QParams,
    opts: FusionOptions,
) -> Result<GradedOperator> {
    let ab = SymmetryBasis::new(alpha, beta, params, opts)?;
    let ba = SymmetryBasis::new(beta, alpha, params, opts)?;
    Ok(outer_sum(ba.vectors(mu), ab.vectors(mu)))
}

/// The three elementary intertwiners for a fixed pair of labels, with all
/// combination coefficients equal to 1.
#[derive(Debug, Clone)]
pub struct IntertwinerSet {
    forward: SymmetryBasis,
    backward: SymmetryBasis,
    p: [GradedOperator; 3],
}

impl IntertwinerSet {
    pub fn new(alpha: ReprLabel, beta: ReprLabel, params: QParams, opts: FusionOptions) -> Result<Self> {
        let forward = SymmetryBasis::new(alpha, beta, params, opts)?;
        let backward = SymmetryBasis::new(beta, alpha, params, opts)?;
        let p = FusionLabel::ALL.map(|mu| outer_sum(backward.vectors(mu), forward.vectors(mu)));
        Ok(Self { forward, backward, p })
    }

    /// `P^{alpha beta}_mu`.
    pub fn get(&self, mu: FusionLabel) -> &GradedOperator {
        &self.p[mu.slot()]
    }

    /// Basis of `V(alpha) (x) V(beta)`.
    pub fn forward_basis(&self) -> &SymmetryBasis {
        &self.forward
    }

    /// Basis of `V(beta) (x) V(alpha)`.
    pub fn backward_basis(&self) -> &SymmetryBasis {
        &self.backward
    }

    pub fn sum(&self) -> GradedOperator {
        let f = GradedSpace::fundamental();
        sum_ops(&f.tensor(&f), &self.p)
    }
}

/// `R(alpha, beta) = P1 + P2 + P3`.
pub fn r_from_projectors(alpha: ReprLabel, beta: ReprLabel, params: QParams) -> Result<GradedOperator> {
    r_from_projectors_with(alpha, beta, params, FusionOptions::default())
}

pub fn r_from_projectors_with(
    alpha: ReprLabel,
    beta: ReprLabel,
    params: QParams,
    opts: FusionOptions,
) -> Result<GradedOperator> {
    Ok(IntertwinerSet::new(alpha, beta, params, opts)?.sum())
}

/// `|G - I|` for the basis of `V(alpha) (x) V(beta)`.
pub fn gram_residual(alpha: ReprLabel, beta: ReprLabel, params: QParams) -> Result<f64> {
    let g = SymmetryBasis::new(alpha, beta, params, FusionOptions::default())?.gram_matrix();
    Ok(crate::superlinalg::max_abs_diff(&g, &CMatrix::identity(16, 16)))
}

/// Largest deviation from `P^{ba}_mu P^{ab}_nu = delta_{mu nu} Proj^{ab}_mu`
/// and `sum_mu Proj^{ab}_mu = I`.
pub fn orthogonality_residual(alpha: ReprLabel, beta: ReprLabel, params: QParams) -> Result<f64> {
    let opts = FusionOptions::default();
    let fwd = IntertwinerSet::new(alpha, beta, params, opts)?;
    let bwd = IntertwinerSet::new(beta, alpha, params, opts)?;
    let space = GradedSpace::fundamental().power(2);
    let zero = GradedOperator::zeros(&space);
    let mut total = zero.clone();
    let mut worst: f64 = 0.0;
    for mu in FusionLabel::ALL {
        let proj = fwd.forward_basis().projector(mu);
        total = &total + &proj;
        for nu in FusionLabel::ALL {
            let expected = if mu == nu { &proj } else { &zero };
            worst = worst.max((bwd.get(mu) * fwd.get(nu)).max_abs_diff(expected));
        }
    }
    Ok(worst.max(total.max_abs_diff(&GradedOperator::identity(&space))))
}

/// `sum_mu |rank P_mu - dim V_mu|`, zero when the ranks are `(4, 8, 4)`.
pub fn rank_defect(alpha: ReprLabel, beta: ReprLabel, params: QParams) -> Result<usize> {
    let set = IntertwinerSet::new(alpha, beta, params, FusionOptions::default())?;
    Ok(FusionLabel::ALL
        .iter()
        .map(|&mu| numerical_rank(set.get(mu).matrix(), 1e-9).abs_diff(mu.dim()))
        .sum())
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(m: &CMatrix, rel_tol: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}
