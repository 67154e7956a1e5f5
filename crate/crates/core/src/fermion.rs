//! Electron-model Hamiltonians derived from the R-matrix, their fermionic
//! forms, gauge transformations, limits, transfer matrices and spectra.
//!
//! A chain of `L` sites is the graded tensor power of the fundamental module.
//! Basis states are ordered site-major with site 1 as the most significant
//! digit; within a site the kets `|1>..|4>` carry the electron states
//! `|up down>, |down>, |up>, |0>`.
//!
//! Fermion operators are the single-site operators `c_up`, `c_down` placed on
//! the chain with the graded embedding. An odd operator on site `j` picks up
//! the parity of every site before `j`, which is the Jordan-Wigner string; the
//! within-site order is fixed by `|up down> = c+_down c+_up |0>`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qdeform::{principal_sqrt, QParams, ReprLabel};
use crate::rmatrix::{r_closed_form, r_rational_labels, SpectralPair};
use crate::superlinalg::{
    embed_one_site, embed_two_site, embed_two_site_sparse, graded_cyclic_shift, graded_permutation, graded_swap,
    CMatrix, GradedOperator, GradedSpace, SignedPermutation, SparseOperator, UnitTensorSum, I, ONE,
};

/// Largest chain for the sparse global Hamiltonian and its spectrum.
pub const MAX_SITES: usize = 6;
/// Largest chain for dense constructions (fermion algebra, transfer matrices).
pub const MAX_DENSE_SITES: usize = 4;

/// Largest central-difference step relative to `max(1, |alpha|)` for the
/// derivative Hamiltonians.
pub const DERIVATIVE_STEP: f64 = 1e-2;
/// Richardson levels applied on top of the central difference.
pub const RICHARDSON_LEVELS: usize = 3;

/// `(n_up, n_down)` of the kets `|1>..|4>`.
const OCCUPATION: [(usize, usize); 4] = [(1, 1), (0, 1), (1, 0), (0, 0)];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermionParams {
    pub xi: f64,
    pub eta: f64,
    pub u: f64,
}

/// `e^eta = q`, `e^xi = [alpha+1]_q / [alpha]_q`, `U = 1 / [alpha]_q`.
pub fn fermionic_parameters(alpha: f64, params: QParams) -> Result<FermionParams> {
    ReprLabel::new(alpha)?;
    let (na, na1) = (params.number(alpha), params.number(alpha + 1.0));
    Ok(FermionParams {
        xi: (na1 / na).ln(),
        eta: params.ln_q(),
        u: 1.0 / na,
    })
}

/// `e^xi = (alpha+1)/alpha`, `eta = 0`, `U = 1/alpha`.
pub fn rational_parameters(alpha: f64) -> Result<FermionParams> {
    ReprLabel::new(alpha)?;
    Ok(FermionParams {
        xi: ((alpha + 1.0) / alpha).ln(),
        eta: 0.0,
        u: 1.0 / alpha,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const ALL: [Spin; 2] = [Spin::Up, Spin::Down];

    /// `sigma = +1` for up, `-1` for down.
    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }

    pub fn flip(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

/// The identification `|4> = |0>`, `|3> = |up>`, `|2> = |down>`,
/// `|1> = |up down>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StateAssignment;

impl StateAssignment {
    /// 1-based ket carrying the given occupations.
    pub fn ket(n_up: usize, n_down: usize) -> usize {
        OCCUPATION
            .iter()
            .position(|&o| o == (n_up, n_down))
            .expect("occupations are 0 or 1")
            + 1
    }

    /// `(n_up, n_down)` of the 1-based ket.
    pub fn occupation(ket: usize) -> (usize, usize) {
        OCCUPATION[ket - 1]
    }

    /// Single-site `c+_up = e34 - e12`, `c+_down = e24 + e13`.
    pub fn creation(spin: Spin) -> GradedOperator {
        let f = GradedSpace::fundamental();
        let e = |i: usize, j: usize| GradedOperator::unit(&f, i - 1, j - 1);
        match spin {
            Spin::Up => &e(3, 4) - &e(1, 2),
            Spin::Down => &e(2, 4) + &e(1, 3),
        }
    }

    pub fn annihilation(spin: Spin) -> GradedOperator {
        Self::creation(spin).adjoint()
    }

    /// Whether every ket's grading equals its fermion-number parity.
    pub fn parity_consistent() -> bool {
        let f = GradedSpace::fundamental();
        (1..=4).all(|k| {
            let (u, d) = Self::occupation(k);
            f.parity_of(k - 1).bit() as usize == (u + d) % 2
        })
    }
}

fn check_dense_len(len: usize, min: usize) -> Result<()> {
    if len < min || len > MAX_DENSE_SITES {
        return Err(Error::Size {
            len,
            min,
            max: MAX_DENSE_SITES,
        });
    }
    Ok(())
}

/// Canonical fermion operators on a chain of `len` sites as dense matrices.
#[derive(Debug, Clone)]
pub struct FermionAlgebra {
    len: usize,
    space: GradedSpace,
    c: Vec<[GradedOperator; 2]>,
}

impl FermionAlgebra {
    pub fn new(len: usize) -> Result<Self> {
        check_dense_len(len, 1)?;
        let f = GradedSpace::fundamental();
        let mut c = Vec::with_capacity(len);
        for site in 1..=len {
            c.push([
                embed_one_site(&f, &StateAssignment::annihilation(Spin::Up), site, len)?,
                embed_one_site(&f, &StateAssignment::annihilation(Spin::Down), site, len)?,
            ]);
        }
        Ok(Self {
            len,
            space: f.power(len),
            c,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    /// `c_{site, spin}` with a 1-based site.
    pub fn c(&self, site: usize, spin: Spin) -> &GradedOperator {
        &self.c[site - 1][spin.slot()]
    }

    pub fn cdag(&self, site: usize, spin: Spin) -> GradedOperator {
        self.c(site, spin).adjoint()
    }

    pub fn n(&self, site: usize, spin: Spin) -> GradedOperator {
        &self.cdag(site, spin) * self.c(site, spin)
    }

    pub fn number(&self, spin: Spin) -> GradedOperator {
        let ns: Vec<_> = (1..=self.len).map(|i| self.n(i, spin)).collect();
        crate::superlinalg::sum_ops(&self.space, &ns)
    }

    pub fn identity(&self) -> GradedOperator {
        GradedOperator::identity(&self.space)
    }

    /// Largest deviation from the canonical anticommutation relations.
    pub fn car_residual(&self) -> f64 {
        let id = self.identity();
        let zero = GradedOperator::zeros(&self.space);
        let mut worst: f64 = 0.0;
        let modes: Vec<(usize, Spin)> = (1..=self.len).flat_map(|i| Spin::ALL.map(|s| (i, s))).collect();
        for &(i, s) in &modes {
            for &(j, t) in &modes {
                let (a, b) = (self.c(i, s), self.c(j, t));
                let bd = self.cdag(j, t);
                let mixed = &(a * &bd) + &(&bd * a);
                let expected = if (i, s) == (j, t) { &id } else { &zero };
                worst = worst.max(mixed.max_abs_diff(expected));
                worst = worst.max((&(a * b) + &(b * a)).max_abs());
            }
        }
        worst
    }

    /// `phase c+_{i s} c_{j s} + h.c.`
    fn hopping(&self, i: usize, j: usize, spin: Spin, phase: Complex64) -> GradedOperator {
        let x = (&self.cdag(i, spin) * self.c(j, spin)).scale(phase);
        &x + &x.adjoint()
    }

    /// `phase c+_{i down} c+_{i up} c_{j up} c_{j down} + h.c.`
    fn pair_hopping(&self, i: usize, j: usize, phase: Complex64) -> GradedOperator {
        let x = &(&(&self.cdag(i, Spin::Down) * &self.cdag(i, Spin::Up)) * self.c(j, Spin::Up)) * self.c(j, Spin::Down);
        let x = x.scale(phase);
        &x + &x.adjoint()
    }

    /// `exp(a n) = 1 + (e^a - 1) n` for a projector `n`.
    fn exp_number(&self, site: usize, spin: Spin, a: f64) -> GradedOperator {
        &self.identity() + &self.n(site, spin).scale(Complex64::new(a.exp() - 1.0, 0.0))
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check_number(alpha: f64, params: QParams) -> Result<f64> {
    let na = params.number(alpha);
    if na == 0.0 || !na.is_finite() {
        return Err(Error::Domain(format!("[{alpha}]_q vanishes")));
    }
    Ok(na)
}

/// The two-site Hamiltonian in `e_ij (x) e_kl` form with `sign(alpha)`
/// replaced by `sign`. No window check: outside the unitary windows the
/// square root turns imaginary and the result is not Hermitian.
pub fn local_hamiltonian_closed_unchecked(alpha: f64, params: QParams, sign: f64) -> Result<GradedOperator> {
    let na = check_number(alpha, params)?;
    let ratio = params.number(alpha + 1.0) / na;
    let r = principal_sqrt(ratio) * sign;
    let (qm, qp) = (params.pow(-0.5), params.pow(0.5));
    let mut h = UnitTensorSum::new();
    h.add_all(
        I * ratio,
        &[((1, 2), (2, 1)), ((2, 1), (1, 2)), ((1, 3), (3, 1)), ((3, 1), (1, 3))],
    );
    h.add(I / na, (4, 1), (1, 4));
    h.add(-I / na, (1, 4), (4, 1));
    h.add_all(I, &[((2, 4), (4, 2)), ((4, 2), (2, 4)), ((3, 4), (4, 3)), ((4, 3), (3, 4))]);
    h.add_all(I * r * qm, &[((1, 2), (4, 3)), ((2, 1), (3, 4))]);
    h.add_all(-I * r * qm, &[((4, 2), (1, 3)), ((2, 4), (3, 1))]);
    h.add_all(I * r * qp, &[((3, 4), (2, 1)), ((4, 3), (1, 2))]);
    h.add_all(-I * r * qp, &[((1, 3), (4, 2)), ((3, 1), (2, 4))]);
    Ok(h.into_operator())
}

/// The two-site Hamiltonian `H12` in `e_ij (x) e_kl` form.
pub fn local_hamiltonian_closed(alpha: f64, params: QParams) -> Result<GradedOperator> {
    let label = ReprLabel::new(alpha)?;
    local_hamiltonian_closed_unchecked(alpha, params, label.sign())
}

/// The local Hamiltonian in the frame of the R-matrix: `H12` with
/// `sign(alpha)` replaced by `+1`. In the type I window this is `H12`; in the
/// type II window it is `H12` after the particle dressing.
pub fn rframe_local_hamiltonian(alpha: f64, params: QParams) -> Result<GradedOperator> {
    ReprLabel::new(alpha)?;
    local_hamiltonian_closed_unchecked(alpha, params, 1.0)
}

/// `d/dx f(x)` by central differences at steps `h, h/2, h/4, ...` with
/// Richardson extrapolation. The step stays inside the unitary window of `x`.
fn window_derivative(x: ReprLabel, f: impl Fn(ReprLabel) -> Result<CMatrix>) -> Result<CMatrix> {
    let a = x.alpha();
    let to_boundary = if a > 0.0 { a } else { -1.0 - a };
    let h0 = (DERIVATIVE_STEP * a.abs().max(1.0)).min(0.25 * to_boundary);
    let central = |h: f64| -> Result<CMatrix> {
        Ok((f(ReprLabel::new(a + h)?)? - f(ReprLabel::new(a - h)?)?) / re(2.0 * h))
    };
    let mut t = (0..=RICHARDSON_LEVELS)
        .map(|k| central(h0 / 2f64.powi(k as i32)))
        .collect::<Result<Vec<_>>>()?;
    for m in 1..=RICHARDSON_LEVELS {
        let w = 4f64.powi(m as i32);
        for k in (m..=RICHARDSON_LEVELS).rev() {
            t[k] = (&t[k] * re(w) - &t[k - 1]) / re(w - 1.0);
        }
    }
    Ok(t.pop().expect("at least one level"))
}

/// `-i (q^{alpha+1} - q^{-alpha-1}) / ln q * d/dalpha R(alpha, beta)|_{beta=alpha}`.
pub fn local_hamiltonian_from_r(alpha: f64, params: QParams) -> Result<GradedOperator> {
    let label = ReprLabel::new(alpha)?;
    let deriv = window_derivative(label, |x| {
        let pair = SpectralPair::from_labels(x, label, params, false)?;
        Ok(r_closed_form(pair)?.op().matrix().clone())
    })?;
    let norm = (params.pow(alpha + 1.0) - params.pow(-alpha - 1.0)) / params.ln_q();
    GradedOperator::on(&GradedSpace::fundamental().power(2), deriv * (-I * norm))
}

/// Local Hamiltonian built from fermion operators on two sites, with
/// `sign(alpha)` replaced by `sign`.
pub fn local_hamiltonian_fermionic_with_sign(alpha: f64, params: QParams, sign: f64) -> Result<GradedOperator> {
    let na = check_number(alpha, params)?;
    let fa = FermionAlgebra::new(2)?;
    let ratio = params.number(alpha + 1.0) / na;
    let r = principal_sqrt(ratio) * sign;
    let id = fa.identity();
    let mut h = GradedOperator::zeros(fa.space());
    for s in Spin::ALL {
        let sg = s.sign();
        let (n1, n2) = (fa.n(1, s.flip()), fa.n(2, s.flip()));
        let bracket = &(&(&id - &n1.scale(ONE + r * params.pow(-sg / 2.0))) - &n2.scale(ONE + r * params.pow(sg / 2.0)))
            + &(&n1 * &n2).scale(ONE + ratio + r * (params.pow(0.5) + params.pow(-0.5)));
        h = &h - &(&fa.hopping(1, 2, s, -I) * &bracket);
    }
    Ok(&h + &fa.pair_hopping(1, 2, -I).scale(re(1.0 / na)))
}

/// Local Hamiltonian built from fermion operators on two sites.
pub fn local_hamiltonian_fermionic(alpha: f64, params: QParams) -> Result<GradedOperator> {
    let label = ReprLabel::new(alpha)?;
    local_hamiltonian_fermionic_with_sign(alpha, params, label.sign())
}

/// Entrywise distance between `h` and the fermionic local Hamiltonian.
pub fn fermionize_residual(h: &GradedOperator, alpha: f64, params: QParams) -> Result<f64> {
    Ok(local_hamiltonian_fermionic(alpha, params)?.max_abs_diff(h))
}

/// Terms of the model Hamiltonian on bond `(i, j)`.
fn model_bond(fa: &FermionAlgebra, fp: FermionParams, i: usize, j: usize) -> GradedOperator {
    let mut h = fa.pair_hopping(i, j, I).scale(re(fp.u));
    for s in Spin::ALL {
        let sg = s.sign();
        let dressing = &fa.exp_number(i, s.flip(), 0.5 * (fp.xi - sg * fp.eta))
            * &fa.exp_number(j, s.flip(), 0.5 * (fp.xi + sg * fp.eta));
        h = &h - &(&fa.hopping(i, j, s, ONE) * &dressing);
    }
    h
}

/// Two-site term of the model with dressed hopping and imaginary pair hopping.
pub fn model_local_hamiltonian(fp: FermionParams) -> GradedOperator {
    let fa = FermionAlgebra::new(2).expect("two sites are within range");
    model_bond(&fa, fp, 1, 2)
}

/// The model on `len` sites built directly from fermion operators, with
/// `c_{L+1} = c_1` when periodic.
pub fn model_hamiltonian(fp: FermionParams, len: usize, periodic: bool) -> Result<GradedOperator> {
    check_dense_len(len, 2)?;
    let fa = FermionAlgebra::new(len)?;
    let bonds = if periodic { len } else { len - 1 };
    let mut h = GradedOperator::zeros(fa.space());
    for i in 1..=bonds {
        h = &h + &model_bond(&fa, fp, i, i % len + 1);
    }
    Ok(h)
}

/// Bariev Hamiltonian built directly from fermion operators on a periodic chain.
pub fn bariev_hamiltonian(eta: f64, len: usize) -> Result<GradedOperator> {
    check_dense_len(len, 2)?;
    let fa = FermionAlgebra::new(len)?;
    let mut h = GradedOperator::zeros(fa.space());
    for i in 1..=len {
        let j = i % len + 1;
        for s in Spin::ALL {
            let sg = s.sign();
            let dressing = &fa.exp_number(i, s.flip(), 0.5 * (1.0 - sg) * eta)
                * &fa.exp_number(j, s.flip(), 0.5 * (1.0 + sg) * eta);
            h = &h - &(&fa.hopping(i, j, s, ONE) * &dressing);
        }
    }
    Ok(h)
}

/// `(N_up, N_down)` of chain basis state `index`.
pub fn sector_of(index: usize, len: usize) -> (usize, usize) {
    let mut rest = index;
    let (mut up, mut down) = (0, 0);
    for _ in 0..len {
        let (u, d) = OCCUPATION[rest % 4];
        up += u;
        down += d;
        rest /= 4;
    }
    (up, down)
}

fn digits(index: usize, len: usize) -> impl Iterator<Item = (usize, usize)> {
    // (1-based site, 0-based ket)
    (1..=len).map(move |site| (site, (index / 4usize.pow((len - site) as u32)) % 4))
}

/// Diagonal of `prod_i (1 - 2 n_{i up} n_{i down})`.
pub fn dressing_phases(len: usize) -> Vec<Complex64> {
    (0..4usize.pow(len as u32))
        .map(|x| {
            let doubles = digits(x, len).filter(|&(_, k)| k == 0).count();
            re(if doubles % 2 == 0 { 1.0 } else { -1.0 })
        })
        .collect()
}

/// Diagonal of `exp(-i pi/2 sum_j j N_j)`, which maps `c_j` to `i^j c_j`.
pub fn site_phases(len: usize) -> Vec<Complex64> {
    (0..4usize.pow(len as u32))
        .map(|x| {
            let w: usize = digits(x, len)
                .map(|(site, k)| site * (OCCUPATION[k].0 + OCCUPATION[k].1))
                .sum();
            // (-i)^w
            [ONE, -I, -ONE, I][w % 4]
        })
        .collect()
}

fn check_chain_dim(h: &GradedOperator, len: usize) -> Result<()> {
    if h.dim() != 4usize.pow(len as u32) {
        return Err(Error::Dimension(format!(
            "operator of dimension {} does not act on {len} sites",
            h.dim()
        )));
    }
    Ok(())
}

/// Conjugation by the unitary implementing `c_{i s} -> c_{i s} (1 - 2 n_{i,-s})`.
pub fn gauge_particle_dressing(h: &GradedOperator, len: usize) -> Result<GradedOperator> {
    check_chain_dim(h, len)?;
    Ok(h.conjugate_by_phases(&dressing_phases(len)))
}

/// Conjugation by the unitary implementing `c_{j s} -> i^j c_{j s}`.
pub fn gauge_site_phase(h: &GradedOperator, len: usize) -> Result<GradedOperator> {
    check_chain_dim(h, len)?;
    Ok(h.conjugate_by_phases(&site_phases(len)))
}

/// Maps an R-frame operator to the model frame: particle dressing, then
/// site phases.
pub fn to_model_frame(h: &GradedOperator, len: usize) -> Result<GradedOperator> {
    gauge_site_phase(&gauge_particle_dressing(h, len)?, len)
}

fn check_sparse_len(len: usize) -> Result<()> {
    if !(2..=MAX_SITES).contains(&len) {
        return Err(Error::Size {
            len,
            min: 2,
            max: MAX_SITES,
        });
    }
    Ok(())
}

/// Sum of the two-site term over all bonds; with `periodic` the bond `(L, 1)`
/// is included, also for `L = 2`.
pub fn chain_sum(local: &GradedOperator, len: usize, periodic: bool) -> Result<SparseOperator> {
    check_sparse_len(len)?;
    let bonds = if periodic { len } else { len - 1 };
    let mut h = SparseOperator::from_triplets(4usize.pow(len as u32), []);
    for i in 1..=bonds {
        h = h.add(&embed_two_site_sparse(local, i, len, periodic)?);
    }
    Ok(h)
}

/// Global model Hamiltonian for representation label `alpha`.
pub fn global_hamiltonian(alpha: f64, params: QParams, len: usize, periodic: bool) -> Result<SparseOperator> {
    global_hamiltonian_from_params(fermionic_parameters(alpha, params)?, len, periodic)
}

pub fn global_hamiltonian_from_params(fp: FermionParams, len: usize, periodic: bool) -> Result<SparseOperator> {
    chain_sum(&model_local_hamiltonian(fp), len, periodic)
}

/// `q -> 1` model with `e^xi = (alpha+1)/alpha`, `U = 1/alpha`.
pub fn rational_limit_hamiltonian(alpha: f64, len: usize) -> Result<SparseOperator> {
    global_hamiltonian_from_params(rational_parameters(alpha)?, len, true)
}

/// Two-site Hamiltonian `-2i (alpha+1) d/dalpha R(alpha, beta)|_{beta=alpha}`
/// from the rational R-matrix, taken to the model frame.
pub fn rational_r_local_hamiltonian(alpha: f64) -> Result<GradedOperator> {
    let label = ReprLabel::new(alpha)?;
    let deriv = window_derivative(label, |x| Ok(r_rational_labels(x, label)?.op().matrix().clone()))?;
    let local = GradedOperator::on(&GradedSpace::fundamental().power(2), deriv * (-I * 2.0 * (alpha + 1.0)))?;
    to_model_frame(&local, 2)
}

/// Global Hamiltonian assembled from [`rational_r_local_hamiltonian`].
pub fn rational_r_hamiltonian(alpha: f64, len: usize) -> Result<SparseOperator> {
    chain_sum(&rational_r_local_hamiltonian(alpha)?, len, true)
}

/// Outcome of comparing the model at large `alpha` with the Bariev model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarievLimit {
    pub alpha: f64,
    /// `U = 1/[alpha]_q`.
    pub u: f64,
    /// Full model against the Bariev Hamiltonian.
    pub deviation: f64,
    /// Same, with the pair-hopping term removed from the model.
    pub deviation_without_pair: f64,
}

/// Compares the periodic model at `alpha` and `q = e^eta` with the Bariev
/// Hamiltonian on `len` sites.
pub fn bariev_limit_check(eta: f64, alpha: f64, len: usize) -> Result<BarievLimit> {
    let params = QParams::new(eta.exp())?;
    let fp = fermionic_parameters(alpha, params)?;
    let bariev = SparseOperator::from_dense(bariev_hamiltonian(eta, len)?.matrix());
    let full = global_hamiltonian_from_params(fp, len, true)?;
    let no_pair = global_hamiltonian_from_params(FermionParams { u: 0.0, ..fp }, len, true)?;
    Ok(BarievLimit {
        alpha,
        u: fp.u,
        deviation: full.max_abs_diff(&bariev),
        deviation_without_pair: no_pair.max_abs_diff(&bariev),
    })
}

/// Basis indices grouped by `(N_up, N_down)`.
pub fn sectors(len: usize) -> BTreeMap<(usize, usize), Vec<usize>> {
    let mut out: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for x in 0..4usize.pow(len as u32) {
        out.entry(sector_of(x, len)).or_default().push(x);
    }
    out
}

/// Largest matrix element between different `(N_up, N_down)` sectors.
pub fn sector_leakage(h: &SparseOperator, len: usize) -> f64 {
    h.leakage(|x| sector_of(x, len))
}

/// Sorted eigenvalues of a Hermitian chain operator, diagonalized sector by
/// sector. Fails if `h` mixes sectors.
pub fn spectrum(h: &SparseOperator, len: usize) -> Result<Vec<f64>> {
    if h.dim() != 4usize.pow(len as u32) {
        return Err(Error::Dimension(format!("operator does not act on {len} sites")));
    }
    if sector_leakage(h, len) != 0.0 {
        return Err(Error::Domain("operator does not conserve (N_up, N_down)".into()));
    }
    let mut out = Vec::with_capacity(h.dim());
    for rows in sectors(len).values() {
        out.extend(h.block(rows).symmetric_eigenvalues().iter().copied());
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Largest imaginary part among the eigenvalues of `h`, computed per sector
/// without assuming Hermiticity.
pub fn spectrum_max_imag(h: &SparseOperator, len: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for rows in sectors(len).values() {
        let block = h.block(rows);
        let ev = block
            .eigenvalues()
            .ok_or_else(|| Error::Domain("eigenvalue iteration did not converge".into()))?;
        worst = ev.iter().map(|z| z.im.abs()).fold(worst, f64::max);
    }
    Ok(worst)
}

/// Dense R-frame chain Hamiltonian from [`rframe_local_hamiltonian`].
pub fn chain_hamiltonian(alpha: f64, params: QParams, len: usize, periodic: bool) -> Result<GradedOperator> {
    check_dense_len(len, 2)?;
    let local = rframe_local_hamiltonian(alpha, params)?;
    let bonds = if periodic { len } else { len - 1 };
    let terms = (1..=bonds)
        .map(|i| embed_two_site(&local, i, len, periodic))
        .collect::<Result<Vec<_>>>()?;
    Ok(crate::superlinalg::sum_ops(&GradedSpace::fundamental().power(len), &terms))
}

/// Graded translation `P_12 P_23 ... P_{L-1,L}`.
pub fn translation_operator(len: usize) -> SignedPermutation {
    graded_cyclic_shift(&GradedSpace::fundamental(), len)
}

/// `t(beta) = str_0[G_0 R_{0L} ... R_{01}]` with `R = P R(beta, alpha)`,
/// auxiliary parameter `beta`, site parameter `alpha` and the twist
/// `G = diag(e^{i phi n})`, `n` the electron number of the auxiliary state.
pub fn twisted_transfer_matrix(beta: f64, alpha: f64, params: QParams, len: usize, phi: f64) -> Result<GradedOperator> {
    check_dense_len(len, 1)?;
    let f = GradedSpace::fundamental();
    let pair = SpectralPair::new(beta, alpha, params)?;
    let local = &graded_permutation(&f, &f) * r_closed_form(pair)?.op();
    let slots = len + 1;
    let mut r = if slots == 2 {
        SparseOperator::from_dense(local.matrix())
    } else {
        embed_two_site_sparse(&local, 1, slots, false)?
    };
    let mut t = r.to_dense();
    for site in 2..=len {
        // R_{0,site} = P_{site-1,site} R_{0,site-1} P_{site-1,site}
        r = r.conjugate(&graded_swap(&f, site, slots)?);
        t = r.mul_dense(&t);
    }
    let d = 4usize.pow(len as u32);
    let mut out = CMatrix::zeros(d, d);
    for (a, &(nu, nd)) in OCCUPATION.iter().enumerate() {
        let w = Complex64::from_polar(f.parity_of(a).sign(), phi * (nu + nd) as f64);
        out += t.view((a * d, a * d), (d, d)) * w;
    }
    GradedOperator::on(&f.power(len), out)
}

pub fn transfer_matrix(beta: f64, alpha: f64, params: QParams, len: usize) -> Result<GradedOperator> {
    twisted_transfer_matrix(beta, alpha, params, len, 0.0)
}

/// Transfer matrix in the model frame. The site-phase gauge is periodic only
/// for `L = 0 mod 4`; the twist `phi = -pi L / 2` absorbs the mismatch at the
/// wrap bond, so the result commutes with [`global_hamiltonian`].
pub fn model_transfer_matrix(beta: f64, alpha: f64, params: QParams, len: usize) -> Result<GradedOperator> {
    let phi = -std::f64::consts::FRAC_PI_2 * len as f64;
    to_model_frame(&twisted_transfer_matrix(beta, alpha, params, len, phi)?, len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superlinalg::{commutator_norm, max_abs_diff, ZERO};

    fn qp(q: f64) -> QParams {
        QParams::new(q).unwrap()
    }

    /// Coefficient of `e_ij (x) e_kl`, read from the matrix with the graded sign removed.
    fn coeff(h: &GradedOperator, (i, j): (usize, usize), (k, l): (usize, usize)) -> Complex64 {
        let mut u = UnitTensorSum::new();
        u.add(ONE, (i, j), (k, l));
        let unit = u.into_operator();
        let pos = unit.matrix().iter().position(|z| *z != ZERO).unwrap();
        h.matrix().as_slice()[pos] / unit.matrix().as_slice()[pos]
    }

    #[test]
    fn parameters() {
        let fp = fermionic_parameters(1.0, qp(2.0)).unwrap();
        assert!((fp.u - 1.0).abs() < 1e-14);
        assert!((fp.xi.exp() - 2.5).abs() < 1e-14);
        assert!((fermionic_parameters(0.7, qp(std::f64::consts::E)).unwrap().eta - 1.0).abs() < 1e-15);
        let far = fermionic_parameters(60.0, qp(1.3)).unwrap();
        assert!((far.xi - far.eta).abs() < 1e-12 && far.u < 1e-6);
        assert!(fermionic_parameters(-2.3, qp(1.3)).unwrap().xi.is_finite());
        assert!(matches!(fermionic_parameters(-0.5, qp(1.3)), Err(Error::NonUnitaryRange(_))));
        assert!((rational_parameters(2.0).unwrap().u - 0.5).abs() < 1e-15);
    }

    #[test]
    fn assignment_and_algebra() {
        assert!(StateAssignment::parity_consistent());
        assert_eq!(StateAssignment::ket(0, 0), 4);
        assert_eq!(StateAssignment::ket(1, 1), 1);
        for len in 1..=3 {
            let fa = FermionAlgebra::new(len).unwrap();
            assert_eq!(fa.car_residual(), 0.0);
            for i in 1..=len {
                for s in Spin::ALL {
                    let n = fa.n(i, s);
                    assert_eq!((&n * &n).max_abs_diff(&n), 0.0);
                }
            }
        }
        // |up down> = c+_down c+_up |0>
        let fa = FermionAlgebra::new(1).unwrap();
        let vac = fa.identity().matrix().column(3).into_owned();
        let state = (fa.cdag(1, Spin::Down).matrix() * fa.cdag(1, Spin::Up).matrix()) * vac;
        assert_eq!(state[0], ONE);
        assert!(matches!(FermionAlgebra::new(5), Err(Error::Size { .. })));
    }

    #[test]
    fn closed_form_coefficients() {
        let p = qp(1.3);
        let h = local_hamiltonian_closed(0.7, p).unwrap();
        let ratio = p.number(1.7) / p.number(0.7);
        assert!((coeff(&h, (1, 2), (2, 1)) - I * ratio).norm() < 1e-14);
        assert!((coeff(&h, (4, 1), (1, 4)) - I / p.number(0.7)).norm() < 1e-14);
        assert!((coeff(&h, (1, 4), (4, 1)) + I / p.number(0.7)).norm() < 1e-14);
        let far = QParams::new(1.2).unwrap();
        assert!(1.0 / far.number(50.0) < 1e-3);
    }

    #[test]
    fn derivative_matches_closed_form() {
        let p = qp(1.3);
        let d = local_hamiltonian_from_r(0.7, p).unwrap();
        assert!(d.hermiticity_residual() < 1e-8);
        assert!(d.max_abs_diff(&local_hamiltonian_closed(0.7, p).unwrap()) < 1e-8);
        // in the type II window the derivative lands on the dressed H12
        let p = qp(1.2);
        let d = local_hamiltonian_from_r(-2.1, p).unwrap();
        let h = local_hamiltonian_closed(-2.1, p).unwrap();
        assert!(d.max_abs_diff(&gauge_particle_dressing(&h, 2).unwrap()) < 1e-8);
        assert!(d.max_abs_diff(&rframe_local_hamiltonian(-2.1, p).unwrap()) < 1e-8);
        assert!(matches!(local_hamiltonian_from_r(-0.5, p), Err(Error::NonUnitaryRange(_))));
    }

    #[test]
    fn hermiticity_only_in_windows() {
        for (a, q) in [(0.7, 1.3), (-2.1, 1.2), (3.3, 2.4), (-1.4, 1.7)] {
            assert!(local_hamiltonian_closed(a, qp(q)).unwrap().hermiticity_residual() < 1e-12);
        }
        let bad = local_hamiltonian_closed_unchecked(-0.5, qp(1.3), -1.0).unwrap();
        assert!(bad.hermiticity_residual() > 0.1);
    }

    #[test]
    fn fermionic_form_matches() {
        for (a, q) in [(0.7, 1.3), (-2.1, 1.2)] {
            let h = local_hamiltonian_closed(a, qp(q)).unwrap();
            assert!(fermionize_residual(&h, a, qp(q)).unwrap() < 1e-10);
        }
        let h = local_hamiltonian_closed(0.7, qp(1.3)).unwrap();
        let fa = FermionAlgebra::new(2).unwrap();
        for s in Spin::ALL {
            assert_eq!(commutator_norm(h.matrix(), fa.number(s).matrix()), 0.0);
        }
    }

    #[test]
    fn gauges() {
        let p = qp(1.3);
        let plus = local_hamiltonian_closed_unchecked(0.7, p, 1.0).unwrap();
        let minus = local_hamiltonian_closed_unchecked(0.7, p, -1.0).unwrap();
        let g = gauge_particle_dressing(&plus, 2).unwrap();
        assert!(g.max_abs_diff(&minus) < 1e-10);
        assert_eq!(gauge_particle_dressing(&g, 2).unwrap().max_abs_diff(&plus), 0.0);
        let phases = site_phases(5);
        let shifted: Vec<_> = site_phases(5).iter().map(|z| z * z * z * z).collect();
        assert!(shifted.iter().all(|z| (*z - ONE).norm() < 1e-15) && phases.len() == 1024);
        // model frame from the fermionic local Hamiltonian
        for (a, q) in [(0.7, 1.3), (-2.1, 1.2)] {
            let rframe = rframe_local_hamiltonian(a, qp(q)).unwrap();
            let model = model_local_hamiltonian(fermionic_parameters(a, qp(q)).unwrap());
            assert!(to_model_frame(&rframe, 2).unwrap().max_abs_diff(&model) < 1e-10);
        }
        assert!(gauge_site_phase(&plus, 3).is_err());
    }

    #[test]
    fn model_limits() {
        let free = model_local_hamiltonian(FermionParams { xi: 0.0, eta: 0.0, u: 0.0 });
        let fa = FermionAlgebra::new(2).unwrap();
        let hop = &fa.hopping(1, 2, Spin::Up, -ONE) + &fa.hopping(1, 2, Spin::Down, -ONE);
        assert_eq!(free.max_abs_diff(&hop), 0.0);
        let fp = FermionParams { xi: 0.3, eta: -1.1, u: 2.0 };
        assert!(model_local_hamiltonian(fp).hermiticity_residual() < 1e-15);
        assert!(bariev_hamiltonian(0.0, 3).unwrap().max_abs_diff(&model_hamiltonian(FermionParams { xi: 0.0, eta: 0.0, u: 0.0 }, 3, true).unwrap()) < 1e-15);
        assert!(bariev_hamiltonian(0.8, 3).unwrap().hermiticity_residual() < 1e-15);
    }

    #[test]
    fn global_matches_fermionic_model() {
        for (a, q) in [(0.7, 1.3), (-2.1, 1.2)] {
            let fp = fermionic_parameters(a, qp(q)).unwrap();
            for len in 2..=3 {
                for periodic in [false, true] {
                    let g = global_hamiltonian(a, qp(q), len, periodic).unwrap();
                    let m = model_hamiltonian(fp, len, periodic).unwrap();
                    assert!(max_abs_diff(&g.to_dense(), m.matrix()) < 1e-12, "{a} {len} {periodic}");
                }
            }
        }
        let fp = fermionic_parameters(-2.1, qp(1.2)).unwrap();
        let g = global_hamiltonian(-2.1, qp(1.2), 4, true).unwrap();
        assert!(max_abs_diff(&g.to_dense(), model_hamiltonian(fp, 4, true).unwrap().matrix()) < 1e-12);
        assert!(matches!(global_hamiltonian(0.7, qp(1.3), 7, true), Err(Error::Size { .. })));
        assert!(matches!(global_hamiltonian(0.7, qp(1.3), 1, true), Err(Error::Size { .. })));
    }

    #[test]
    fn l2_periodic_counts_both_bonds() {
        let fp = fermionic_parameters(0.7, qp(1.3)).unwrap();
        let g = global_hamiltonian(0.7, qp(1.3), 2, true).unwrap().to_dense();
        let fa = FermionAlgebra::new(2).unwrap();
        let by_hand = &model_bond(&fa, fp, 1, 2) + &model_bond(&fa, fp, 2, 1);
        assert!(max_abs_diff(&g, by_hand.matrix()) < 1e-14);
    }

    #[test]
    fn global_conservation_and_spectrum() {
        let g = global_hamiltonian(0.7, qp(1.3), 3, true).unwrap();
        assert_eq!(sector_leakage(&g, 3), 0.0);
        assert!(g.hermiticity_residual() < 1e-12);
        assert!(spectrum_max_imag(&g, 3).unwrap() < 1e-9);
        let ev = spectrum(&g, 3).unwrap();
        assert_eq!(ev.len(), 64);
        assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        // unitary gauges do not move the spectrum
        let dense = GradedOperator::on(&GradedSpace::fundamental().power(3), g.to_dense()).unwrap();
        let gauged = gauge_site_phase(&gauge_particle_dressing(&dense, 3).unwrap(), 3).unwrap();
        let ev2 = spectrum(&SparseOperator::from_dense(gauged.matrix()), 3).unwrap();
        assert!(ev.iter().zip(&ev2).all(|(x, y)| (x - y).abs() < 1e-10));
    }

    #[test]
    fn transfer_matrices() {
        let p = qp(1.3);
        for len in [2, 3] {
            let t1 = transfer_matrix(1.1, 0.7, p, len).unwrap();
            let t2 = transfer_matrix(2.2, 0.7, p, len).unwrap();
            assert!(commutator_norm(t1.matrix(), t2.matrix()) < 1e-9);
            let h = chain_hamiltonian(0.7, p, len, true).unwrap();
            assert!(commutator_norm(t1.matrix(), h.matrix()) < 1e-8);
            let t0 = transfer_matrix(0.7, 0.7, p, len).unwrap();
            assert!(max_abs_diff(t0.matrix(), &translation_operator(len).to_matrix()) < 1e-10);
            let m1 = model_transfer_matrix(1.1, 0.7, p, len).unwrap();
            let g = global_hamiltonian(0.7, p, len, true).unwrap().to_dense();
            assert!(commutator_norm(m1.matrix(), &g) < 1e-8);
        }
        assert!(matches!(transfer_matrix(1.1, 0.7, p, 5), Err(Error::Size { .. })));
    }

    #[test]
    fn rational_limit() {
        let a = 0.7;
        let lim = rational_limit_hamiltonian(a, 2).unwrap();
        let from_r = rational_r_hamiltonian(a, 2).unwrap();
        assert!(lim.max_abs_diff(&from_r) < 1e-8);
        let near = global_hamiltonian(a, qp(1.0 + 1e-6), 2, true).unwrap();
        assert!(lim.max_abs_diff(&near) < 1e-4);
        let lim2 = rational_limit_hamiltonian(-2.1, 2).unwrap();
        assert!(lim2.max_abs_diff(&rational_r_hamiltonian(-2.1, 2).unwrap()) < 1e-8);
    }

    #[test]
    fn bariev() {
        let check = bariev_limit_check(1.2f64.ln(), 50.0, 2).unwrap();
        assert!(check.u < 1e-4);
        assert!(check.deviation < 1e-3);
        // on two periodic sites the pair hopping of bond (2,1) cancels that of (1,2)
        assert_eq!(check.deviation, check.deviation_without_pair);
        let check = bariev_limit_check(1.2f64.ln(), 50.0, 3).unwrap();
        assert!(check.deviation < 1e-3);
        assert!((check.deviation - check.u).abs() < 1e-6);
        assert!(check.deviation_without_pair < 1e-7);
    }
}
