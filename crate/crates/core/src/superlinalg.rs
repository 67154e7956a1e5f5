//! Z2-graded linear algebra on small dense complex matrices.
//!
//! All Koszul sign bookkeeping lives here: [`graded_tensor`] implements
//! `(A (x) B)(v (x) w) = (-1)^([B][v]) Av (x) Bw`, [`graded_permutation`] the
//! signed swap, [`graded_adjoint`] the dual of a product ket. Other modules
//! never re-derive signs locally.
//!
//! Basis conventions: the fundamental 4-dimensional module has basis
//! `|1>, |2>, |3>, |4>` stored at indices `0..4` with parities `[0, 1, 1, 0]`;
//! tensor bases are lexicographic, `|i> (x) |j>` at `i * dim_right + j`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub(crate) const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    #[inline]
    pub fn from_bit(bit: u8) -> Self {
        if bit & 1 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    #[inline]
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `(-1)^self`.
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    /// Koszul sign `(-1)^(self * other)`.
    #[inline]
    pub fn koszul(self, other: Parity) -> f64 {
        if self.is_odd() && other.is_odd() {
            -1.0
        } else {
            1.0
        }
    }
}

impl Add for Parity {
    type Output = Parity;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() ^ rhs.bit())
    }
}

/// Finite-dimensional Z2-graded space given by the parity of each basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    parity: Vec<Parity>,
}

impl GradedSpace {
    pub fn new(parity: Vec<Parity>) -> Result<Self> {
        if parity.is_empty() {
            return Err(Error::Dimension("graded space must be non-empty".into()));
        }
        Ok(Self { parity })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        Self::new(bits.iter().map(|&b| Parity::from_bit(b)).collect())
    }

    /// `V(0,0|alpha)`: `[|1>] = [|4>] = 0`, `[|2>] = [|3>] = 1`.
    pub fn fundamental() -> Self {
        Self {
            parity: vec![Parity::Even, Parity::Odd, Parity::Odd, Parity::Even],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.parity.len()
    }

    #[inline]
    pub fn parity_of(&self, index: usize) -> Parity {
        self.parity[index]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parity
    }

    pub fn tensor(&self, other: &GradedSpace) -> GradedSpace {
        let mut parity = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.parity {
            for &b in &other.parity {
                parity.push(a + b);
            }
        }
        GradedSpace { parity }
    }

    /// `n`-fold tensor power, `n >= 1`.
    pub fn power(&self, n: usize) -> GradedSpace {
        assert!(n >= 1, "tensor power needs n >= 1");
        (1..n).fold(self.clone(), |acc, _| acc.tensor(self))
    }

    /// Superdimension `sum_a (-1)^[a]`.
    pub fn superdim(&self) -> f64 {
        self.parity.iter().map(|p| p.sign()).sum()
    }
}

/// Parity of a matrix between two graded spaces; `None` if it mixes parities.
/// The zero matrix counts as even.
fn matrix_parity(matrix: &CMatrix, domain: &GradedSpace, codomain: &GradedSpace) -> Option<Parity> {
    let mut found: Option<Parity> = None;
    for c in 0..matrix.ncols() {
        let pc = domain.parity_of(c);
        for r in 0..matrix.nrows() {
            if matrix[(r, c)] != ZERO {
                let p = codomain.parity_of(r) + pc;
                match found {
                    None => found = Some(p),
                    Some(f) if f != p => return None,
                    _ => {}
                }
            }
        }
    }
    Some(found.unwrap_or(Parity::Even))
}

/// Dense complex operator between graded spaces, with its parity recorded at
/// construction. Immutable; arithmetic returns new operators.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedOperator {
    matrix: CMatrix,
    domain: GradedSpace,
    codomain: GradedSpace,
    parity: Option<Parity>,
}

impl GradedOperator {
    pub fn new(matrix: CMatrix, domain: GradedSpace, codomain: GradedSpace) -> Result<Self> {
        if matrix.nrows() != codomain.dim() || matrix.ncols() != domain.dim() {
            return Err(Error::Dimension(format!(
                "matrix is {}x{} but spaces are {} -> {}",
                matrix.nrows(),
                matrix.ncols(),
                domain.dim(),
                codomain.dim()
            )));
        }
        let parity = matrix_parity(&matrix, &domain, &codomain);
        Ok(Self {
            matrix,
            domain,
            codomain,
            parity,
        })
    }

    /// Endomorphism of `space`.
    pub fn on(space: &GradedSpace, matrix: CMatrix) -> Result<Self> {
        Self::new(matrix, space.clone(), space.clone())
    }

    fn on_unchecked(space: &GradedSpace, matrix: CMatrix) -> Self {
        let parity = matrix_parity(&matrix, space, space);
        Self {
            matrix,
            domain: space.clone(),
            codomain: space.clone(),
            parity,
        }
    }

    pub fn identity(space: &GradedSpace) -> Self {
        Self {
            matrix: CMatrix::identity(space.dim(), space.dim()),
            domain: space.clone(),
            codomain: space.clone(),
            parity: Some(Parity::Even),
        }
    }

    pub fn zeros(space: &GradedSpace) -> Self {
        Self {
            matrix: CMatrix::zeros(space.dim(), space.dim()),
            domain: space.clone(),
            codomain: space.clone(),
            parity: Some(Parity::Even),
        }
    }

    /// Matrix unit `e_ij = |i><j|` with 0-based indices.
    pub fn unit(space: &GradedSpace, i: usize, j: usize) -> Self {
        let mut m = CMatrix::zeros(space.dim(), space.dim());
        m[(i, j)] = ONE;
        Self {
            matrix: m,
            domain: space.clone(),
            codomain: space.clone(),
            parity: Some(space.parity_of(i) + space.parity_of(j)),
        }
    }

    /// Diagonal operator.
    pub fn diagonal(space: &GradedSpace, diag: &[Complex64]) -> Result<Self> {
        if diag.len() != space.dim() {
            return Err(Error::Dimension("diagonal length mismatch".into()));
        }
        Ok(Self {
            matrix: CMatrix::from_diagonal(&CVector::from_column_slice(diag)),
            domain: space.clone(),
            codomain: space.clone(),
            parity: Some(Parity::Even),
        })
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    #[inline]
    pub fn domain(&self) -> &GradedSpace {
        &self.domain
    }

    #[inline]
    pub fn codomain(&self) -> &GradedSpace {
        &self.codomain
    }

    /// `Some(p)` for a homogeneous operator of parity `p`, `None` otherwise.
    #[inline]
    pub fn parity(&self) -> Option<Parity> {
        self.parity
    }

    pub fn homogeneous_parity(&self) -> Result<Parity> {
        self.parity.ok_or(Error::Parity)
    }

    pub fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            matrix: &self.matrix * c,
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            parity: self.parity,
        }
    }

    /// Conjugate transpose of the matrix.
    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            parity: self.parity,
        }
    }

    pub fn compose(&self, rhs: &GradedOperator) -> GradedOperator {
        assert_eq!(
            self.domain.dim(),
            rhs.codomain.dim(),
            "operator composition dimension mismatch"
        );
        let matrix = &self.matrix * &rhs.matrix;
        let parity = match (self.parity, rhs.parity) {
            (Some(a), Some(b)) => Some(a + b),
            _ => matrix_parity(&matrix, &rhs.domain, &self.codomain),
        };
        GradedOperator {
            matrix,
            domain: rhs.domain.clone(),
            codomain: self.codomain.clone(),
            parity,
        }
    }

    pub fn apply(&self, v: &GradedVector) -> GradedVector {
        GradedVector {
            components: &self.matrix * &v.components,
            space: self.codomain.clone(),
        }
    }

    /// Max-abs-entry distance.
    pub fn max_abs_diff(&self, other: &GradedOperator) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }

    /// `|| A - A^dag ||_max`.
    pub fn hermiticity_residual(&self) -> f64 {
        max_abs_diff(&self.matrix, &self.matrix.adjoint())
    }

    pub fn max_imag(&self) -> f64 {
        self.matrix.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    /// Conjugation `D A D^-1` by a diagonal matrix whose entries have unit
    /// modulus, `D^-1 = conj(D)`.
    pub fn conjugate_by_phases(&self, phases: &[Complex64]) -> GradedOperator {
        assert_eq!(phases.len(), self.dim());
        let mut m = self.matrix.clone();
        for c in 0..m.ncols() {
            let pc = phases[c].conj();
            for r in 0..m.nrows() {
                m[(r, c)] *= phases[r] * pc;
            }
        }
        GradedOperator::on_unchecked(&self.domain, m)
    }
}

impl Add for &GradedOperator {
    type Output = GradedOperator;

    fn add(self, rhs: &GradedOperator) -> GradedOperator {
        assert_eq!(self.domain, rhs.domain, "operator sum domain mismatch");
        let matrix = &self.matrix + &rhs.matrix;
        let parity = match (self.parity, rhs.parity) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => matrix_parity(&matrix, &self.domain, &self.codomain),
        };
        GradedOperator {
            matrix,
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            parity,
        }
    }
}

impl Sub for &GradedOperator {
    type Output = GradedOperator;

    fn sub(self, rhs: &GradedOperator) -> GradedOperator {
        self + &(-rhs)
    }
}

impl Neg for &GradedOperator {
    type Output = GradedOperator;

    fn neg(self) -> GradedOperator {
        self.scale(-ONE)
    }
}

impl Mul for &GradedOperator {
    type Output = GradedOperator;

    fn mul(self, rhs: &GradedOperator) -> GradedOperator {
        self.compose(rhs)
    }
}

/// Sum of operators on a common space.
pub fn sum_ops<'a, I>(space: &GradedSpace, ops: I) -> GradedOperator
where
    I: IntoIterator<Item = &'a GradedOperator>,
{
    ops.into_iter()
        .fold(GradedOperator::zeros(space), |acc, op| &acc + op)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// `|| AB - BA ||_max`.
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs_diff(&(a * b), &(b * a))
}

/// Graded tensor product of homogeneous operators.
///
/// Entry `((i,j),(k,l))` equals `(-1)^([B][k]) A_ik B_jl`, with `k` the column
/// (input) state of the `A` slot, so that
/// `(A (x) B)(C (x) D) = (-1)^([B][C]) AC (x) BD`.
pub fn graded_tensor(a: &GradedOperator, b: &GradedOperator) -> Result<GradedOperator> {
    a.homogeneous_parity()?;
    let pb = b.homogeneous_parity()?;
    let mut matrix = a.matrix.kronecker(&b.matrix);
    if pb.is_odd() {
        let bc = b.matrix.ncols();
        for k in 0..a.matrix.ncols() {
            if a.domain.parity_of(k).is_odd() {
                matrix.columns_mut(k * bc, bc).neg_mut();
            }
        }
    }
    let parity = match (a.parity, b.parity) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    };
    Ok(GradedOperator {
        matrix,
        domain: a.domain.tensor(&b.domain),
        codomain: a.codomain.tensor(&b.codomain),
        parity,
    })
}

/// Graded permutation `P: V (x) W -> W (x) V`,
/// `P(v (x) w) = (-1)^([v][w]) w (x) v`.
pub fn graded_permutation(v: &GradedSpace, w: &GradedSpace) -> GradedOperator {
    let (dv, dw) = (v.dim(), w.dim());
    let mut m = CMatrix::zeros(dv * dw, dv * dw);
    for i in 0..dv {
        for j in 0..dw {
            m[(j * dv + i, i * dw + j)] = Complex64::new(v.parity_of(i).koszul(w.parity_of(j)), 0.0);
        }
    }
    GradedOperator {
        matrix: m,
        domain: v.tensor(w),
        codomain: w.tensor(v),
        parity: Some(Parity::Even),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradedVector {
    components: CVector,
    space: GradedSpace,
}

impl GradedVector {
    pub fn new(components: CVector, space: GradedSpace) -> Result<Self> {
        if components.len() != space.dim() {
            return Err(Error::Dimension("vector length mismatch".into()));
        }
        Ok(Self { components, space })
    }

    pub fn zeros(space: &GradedSpace) -> Self {
        Self {
            components: CVector::zeros(space.dim()),
            space: space.clone(),
        }
    }

    /// Basis ket with 0-based index.
    pub fn basis(space: &GradedSpace, index: usize) -> Self {
        let mut v = Self::zeros(space);
        v.components[index] = ONE;
        v
    }

    #[inline]
    pub fn components(&self) -> &CVector {
        &self.components
    }

    #[inline]
    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            components: &self.components * c,
            space: self.space.clone(),
        }
    }

    /// Adds `c * |index>` in place.
    pub fn add_basis(&mut self, index: usize, c: Complex64) {
        self.components[index] += c;
    }
}

/// Dual of a ket on `V (x) W`, stored as coefficients of the product
/// covectors `<x| (x) <y|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualVector {
    coefficients: CVector,
    left: GradedSpace,
    right: GradedSpace,
}

impl DualVector {
    /// Coefficient of `<x| (x) <y|`.
    pub fn coefficient(&self, x: usize, y: usize) -> Complex64 {
        self.coefficients[x * self.right.dim() + y]
    }

    /// Evaluation on a ket, using the graded rule
    /// `(<x| (x) <y|)(|x'> (x) |y'>) = (-1)^([y][x']) <x|x'> <y|y'>`.
    pub fn pair(&self, ket: &GradedVector) -> Complex64 {
        self.row().dot(ket.components())
    }

    /// The dual as a plain row of evaluation coefficients.
    pub fn row(&self) -> CVector {
        let dr = self.right.dim();
        CVector::from_iterator(
            self.coefficients.len(),
            self.coefficients.iter().enumerate().map(|(k, &c)| {
                let (x, y) = (k / dr, k % dr);
                c * self.right.parity_of(y).koszul(self.left.parity_of(x))
            }),
        )
    }

    /// `(<x| (x) <y|)^dag = (-1)^([x][y]) |x> (x) |y>`, extended antilinearly.
    pub fn adjoint(&self) -> GradedVector {
        let dr = self.right.dim();
        let components = CVector::from_iterator(
            self.coefficients.len(),
            self.coefficients.iter().enumerate().map(|(k, &c)| {
                let (x, y) = (k / dr, k % dr);
                c.conj() * self.left.parity_of(x).koszul(self.right.parity_of(y))
            }),
        );
        GradedVector {
            components,
            space: self.left.tensor(&self.right),
        }
    }
}

/// Graded adjoint of a ket on `left (x) right`:
/// `(|x> (x) |y>)^dag = (-1)^([x][y]) <x| (x) <y|`, extended antilinearly.
pub fn graded_adjoint(v: &GradedVector, left: &GradedSpace, right: &GradedSpace) -> Result<DualVector> {
    if v.space != left.tensor(right) {
        return Err(Error::Dimension("vector space is not left (x) right".into()));
    }
    let dr = right.dim();
    let coefficients = CVector::from_iterator(
        v.components.len(),
        v.components.iter().enumerate().map(|(k, &c)| {
            let (x, y) = (k / dr, k % dr);
            c.conj() * left.parity_of(x).koszul(right.parity_of(y))
        }),
    );
    Ok(DualVector {
        coefficients,
        left: left.clone(),
        right: right.clone(),
    })
}

/// `|ket><dual|` as an operator.
pub fn outer(ket: &GradedVector, dual: &DualVector) -> GradedOperator {
    let matrix = ket.components() * dual.row().transpose();
    GradedOperator::new(matrix, dual.left.tensor(&dual.right), ket.space.clone())
        .expect("outer product dimensions are consistent by construction")
}

/// Signed permutation matrix `S|c> = sign[c] |image[c]>`, applied by index
/// relabelling instead of dense products.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedPermutation {
    image: Vec<usize>,
    sign: Vec<f64>,
}

impl SignedPermutation {
    pub fn new(image: Vec<usize>, sign: Vec<f64>) -> Result<Self> {
        let n = image.len();
        if sign.len() != n {
            return Err(Error::Dimension("sign length mismatch".into()));
        }
        let mut seen = vec![false; n];
        for &i in &image {
            if i >= n || seen[i] {
                return Err(Error::Dimension("image is not a permutation".into()));
            }
            seen[i] = true;
        }
        Ok(Self { image, sign })
    }

    pub fn dim(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn signs(&self) -> &[f64] {
        &self.sign
    }

    pub fn to_matrix(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for c in 0..n {
            m[(self.image[c], c)] = Complex64::new(self.sign[c], 0.0);
        }
        m
    }

    /// `S^-1 A S`.
    pub fn conjugate_inverse(&self, a: &GradedOperator) -> GradedOperator {
        let n = self.dim();
        assert_eq!(a.dim(), n);
        let src = a.matrix();
        let m = CMatrix::from_fn(n, n, |r, c| {
            src[(self.image[r], self.image[c])] * (self.sign[r] * self.sign[c])
        });
        GradedOperator::on_unchecked(a.domain(), m)
    }

    /// `S A S^-1`.
    pub fn conjugate(&self, a: &GradedOperator) -> GradedOperator {
        let n = self.dim();
        assert_eq!(a.dim(), n);
        let src = a.matrix();
        let mut m = CMatrix::zeros(n, n);
        for c in 0..n {
            for r in 0..n {
                m[(self.image[r], self.image[c])] = src[(r, c)] * (self.sign[r] * self.sign[c]);
            }
        }
        GradedOperator::on_unchecked(a.domain(), m)
    }
}

/// Graded swap `P_{site, site+1}` of two neighbouring factors of `local^(x)L`
/// (1-based site).
pub fn graded_swap(local: &GradedSpace, site: usize, chain_length: usize) -> Result<SignedPermutation> {
    if site == 0 || site >= chain_length {
        return Err(Error::Index {
            site,
            len: chain_length,
        });
    }
    let d = local.dim();
    let n = d.pow(chain_length as u32);
    let stride = d.pow((chain_length - site - 1) as u32);
    let mut image = vec![0; n];
    let mut sign = vec![1.0; n];
    for c in 0..n {
        let x = (c / (stride * d)) % d;
        let y = (c / stride) % d;
        image[c] = c - x * stride * d - y * stride + y * stride * d + x * stride;
        sign[c] = local.parity_of(x).koszul(local.parity_of(y));
    }
    Ok(SignedPermutation { image, sign })
}

/// Graded cyclic shift `P_12 P_23 ... P_{L-1,L}` on `local^(x)L`.
///
/// Moves the content of site `k` to site `k - 1` (site 1 wraps to site `L`),
/// with the Koszul sign of carrying the first factor past all the others.
pub fn graded_cyclic_shift(local: &GradedSpace, chain_length: usize) -> SignedPermutation {
    let d = local.dim();
    let n = d.pow(chain_length as u32);
    let mut image = vec![0; n];
    let mut sign = vec![1.0; n];
    let mut digits = vec![0usize; chain_length];
    for c in 0..n {
        let mut rest = c;
        for k in (0..chain_length).rev() {
            digits[k] = rest % d;
            rest /= d;
        }
        // rightmost factor P_{L-1,L} acts first
        let mut s = 1.0;
        for k in (0..chain_length.saturating_sub(1)).rev() {
            s *= local
                .parity_of(digits[k])
                .koszul(local.parity_of(digits[k + 1]));
            digits.swap(k, k + 1);
        }
        image[c] = digits.iter().fold(0, |acc, &x| acc * d + x);
        sign[c] = s;
    }
    SignedPermutation { image, sign }
}

/// `H` acting on sites `(site, site + 1)` of a chain of `chain_length` copies
/// of the fundamental module; sites are 1-based. `site == chain_length` is the
/// wrap-around bond `(L, 1)` on a periodic chain, obtained by conjugating the
/// `(1, 2)` term with the graded cyclic shift.
pub fn embed_two_site(
    h: &GradedOperator,
    site: usize,
    chain_length: usize,
    periodic: bool,
) -> Result<GradedOperator> {
    embed_two_site_in(&GradedSpace::fundamental(), h, site, chain_length, periodic)
}

pub fn embed_two_site_in(
    local: &GradedSpace,
    h: &GradedOperator,
    site: usize,
    chain_length: usize,
    periodic: bool,
) -> Result<GradedOperator> {
    let pair = local.tensor(local);
    if h.domain() != &pair || h.codomain() != &pair {
        return Err(Error::Dimension("two-site operator must act on V (x) V".into()));
    }
    if chain_length < 2 {
        return Err(Error::Size {
            len: chain_length,
            min: 2,
            max: usize::MAX,
        });
    }
    if site == 0 || site > chain_length {
        return Err(Error::Index {
            site,
            len: chain_length,
        });
    }
    if site == chain_length {
        if !periodic {
            return Err(Error::Boundary { len: chain_length });
        }
        let first = embed_two_site_in(local, h, 1, chain_length, false)?;
        let shift = graded_cyclic_shift(local, chain_length);
        return Ok(shift.conjugate_inverse(&first));
    }
    let mut op = h.clone();
    if site > 1 {
        let left = GradedOperator::identity(&local.power(site - 1));
        op = graded_tensor(&left, &op)?;
    }
    if site + 1 < chain_length {
        let right = GradedOperator::identity(&local.power(chain_length - site - 1));
        op = graded_tensor(&op, &right)?;
    }
    Ok(op)
}

/// Operator `a` placed on one site of the chain, identity elsewhere, with the
/// graded embedding; for odd `a` this produces the Jordan-Wigner string.
pub fn embed_one_site(
    local: &GradedSpace,
    a: &GradedOperator,
    site: usize,
    chain_length: usize,
) -> Result<GradedOperator> {
    if site == 0 || site > chain_length {
        return Err(Error::Index {
            site,
            len: chain_length,
        });
    }
    let mut op = a.clone();
    if site > 1 {
        op = graded_tensor(&GradedOperator::identity(&local.power(site - 1)), &op)?;
    }
    if site < chain_length {
        op = graded_tensor(&op, &GradedOperator::identity(&local.power(chain_length - site)))?;
    }
    Ok(op)
}

/// Partial supertrace over the leading auxiliary factor `aux`:
/// `str_0 M = sum_a (-1)^[a] <a|_0 M |a>_0`.
pub fn partial_supertrace(aux: &GradedSpace, m: &GradedOperator) -> Result<GradedOperator> {
    let n = m.dim();
    if !n.is_multiple_of(aux.dim()) || m.domain() != m.codomain() {
        return Err(Error::Dimension("operator does not factor as aux (x) rest".into()));
    }
    let d = n / aux.dim();
    let mut out = CMatrix::zeros(d, d);
    for a in 0..aux.dim() {
        let s = aux.parity_of(a).sign();
        out += m.matrix().view((a * d, a * d), (d, d)) * Complex64::new(s, 0.0);
    }
    let pa0 = aux.parity_of(0);
    let rest = GradedSpace::new(
        (0..d)
            .map(|k| m.domain().parity_of(k) + pa0)
            .collect(),
    )?;
    GradedOperator::on(&rest, out)
}

/// Partial supertrace over a leading fundamental module.
pub fn partial_supertrace_aux(m: &GradedOperator) -> Result<GradedOperator> {
    partial_supertrace(&GradedSpace::fundamental(), m)
}

/// Sparse square matrix stored as `(row, col, value)` triplets sorted by row
/// then column, without duplicates or exact zeros. Used for chain operators
/// too large to hold densely; grading is not tracked.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseOperator {
    /// Sums duplicate positions and drops exact zeros.
    pub fn from_triplets<I>(dim: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut v: Vec<_> = triplets.into_iter().collect();
        v.sort_by_key(|&(r, c, _)| (r, c));
        let mut entries: Vec<(usize, usize, Complex64)> = Vec::with_capacity(v.len());
        for (r, c, x) in v {
            assert!(r < dim && c < dim, "entry ({r}, {c}) outside dimension {dim}");
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += x,
                _ => entries.push((r, c, x)),
            }
        }
        entries.retain(|e| e.2 != ZERO);
        Self { dim, entries }
    }

    pub fn from_dense(m: &CMatrix) -> Self {
        let mut entries = Vec::new();
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                if m[(r, c)] != ZERO {
                    entries.push((r, c, m[(r, c)]));
                }
            }
        }
        Self { dim: m.nrows(), entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for &(r, c, x) in &self.entries {
            m[(r, c)] = x;
        }
        m
    }

    /// `self * m`.
    pub fn mul_dense(&self, m: &CMatrix) -> CMatrix {
        assert_eq!(m.nrows(), self.dim);
        let mut out = CMatrix::zeros(self.dim, m.ncols());
        for &(r, c, x) in &self.entries {
            for k in 0..m.ncols() {
                out[(r, k)] += x * m[(c, k)];
            }
        }
        out
    }

    pub fn add(&self, other: &SparseOperator) -> SparseOperator {
        assert_eq!(self.dim, other.dim);
        Self::from_triplets(self.dim, self.entries.iter().chain(&other.entries).copied())
    }

    pub fn scale(&self, z: Complex64) -> SparseOperator {
        Self::from_triplets(self.dim, self.entries.iter().map(|&(r, c, x)| (r, c, x * z)))
    }

    pub fn adjoint(&self) -> SparseOperator {
        Self::from_triplets(self.dim, self.entries.iter().map(|&(r, c, x)| (c, r, x.conj())))
    }

    /// `S A S^-1`.
    pub fn conjugate(&self, s: &SignedPermutation) -> SparseOperator {
        assert_eq!(s.dim(), self.dim);
        Self::from_triplets(
            self.dim,
            self.entries
                .iter()
                .map(|&(r, c, x)| (s.image[r], s.image[c], x * (s.sign[r] * s.sign[c]))),
        )
    }

    /// `S^-1 A S`.
    pub fn conjugate_inverse(&self, s: &SignedPermutation) -> SparseOperator {
        assert_eq!(s.dim(), self.dim);
        let mut inv = vec![0; self.dim];
        for (c, &i) in s.image.iter().enumerate() {
            inv[i] = c;
        }
        Self::from_triplets(
            self.dim,
            self.entries.iter().map(|&(r, c, x)| {
                let (r0, c0) = (inv[r], inv[c]);
                (r0, c0, x * (s.sign[r0] * s.sign[c0]))
            }),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.2.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &SparseOperator) -> f64 {
        self.add(&other.scale(-ONE)).max_abs()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Dense block `A[rows, rows]`.
    pub fn block(&self, rows: &[usize]) -> CMatrix {
        let mut pos = vec![usize::MAX; self.dim];
        for (k, &r) in rows.iter().enumerate() {
            pos[r] = k;
        }
        let mut m = CMatrix::zeros(rows.len(), rows.len());
        for &(r, c, x) in &self.entries {
            if pos[r] != usize::MAX && pos[c] != usize::MAX {
                m[(pos[r], pos[c])] = x;
            }
        }
        m
    }

    /// Largest entry connecting index `r` to index `c` with `key(r) != key(c)`.
    pub fn leakage<K: PartialEq>(&self, key: impl Fn(usize) -> K) -> f64 {
        self.entries
            .iter()
            .filter(|&&(r, c, _)| key(r) != key(c))
            .map(|e| e.2.norm())
            .fold(0.0, f64::max)
    }
}

/// Even two-site operator `local` (acting on `V (x) V`) on bond
/// `(site, site + 1)` of a chain of fundamental modules, in sparse form. The
/// wrap bond `site == chain_length` is the bond-1 term conjugated by the
/// graded cyclic shift.
pub fn embed_two_site_sparse(
    local: &GradedOperator,
    site: usize,
    chain_length: usize,
    periodic: bool,
) -> Result<SparseOperator> {
    let f = GradedSpace::fundamental();
    if local.domain() != &f.tensor(&f) || local.codomain() != &f.tensor(&f) {
        return Err(Error::Dimension("two-site operator must act on V (x) V".into()));
    }
    if local.parity() != Some(Parity::Even) {
        return Err(Error::Parity);
    }
    if chain_length < 2 {
        return Err(Error::Size {
            len: chain_length,
            min: 2,
            max: usize::MAX,
        });
    }
    if site == 0 || site > chain_length {
        return Err(Error::Index {
            site,
            len: chain_length,
        });
    }
    if site == chain_length {
        if !periodic {
            return Err(Error::Boundary { len: chain_length });
        }
        let first = embed_two_site_sparse(local, 1, chain_length, false)?;
        return Ok(first.conjugate_inverse(&graded_cyclic_shift(&f, chain_length)));
    }
    let n = 4usize.pow(chain_length as u32);
    let stride = 4usize.pow((chain_length - site - 1) as u32);
    let m = local.matrix();
    let mut triplets = Vec::new();
    for c in 0..n {
        let c16 = (c / stride) % 16;
        let base = c - c16 * stride;
        for r16 in 0..16 {
            let x = m[(r16, c16)];
            if x != ZERO {
                triplets.push((base + r16 * stride, c, x));
            }
        }
    }
    Ok(SparseOperator::from_triplets(n, triplets))
}

/// 1-based labels `((i, j), (k, l))` of `e_ij (x) e_kl`.
pub type UnitPair = ((usize, usize), (usize, usize));

/// Accumulator for `sum c e_ij (x) e_kl` on `V (x) V`, with graded tensor
/// products of matrix units and 1-based labels.
#[derive(Debug, Clone)]
pub struct UnitTensorSum {
    space: GradedSpace,
    m: CMatrix,
}

impl Default for UnitTensorSum {
    fn default() -> Self {
        Self::new()
    }
}

impl UnitTensorSum {
    pub fn new() -> Self {
        let f = GradedSpace::fundamental();
        Self {
            space: f.clone(),
            m: CMatrix::zeros(16, 16),
        }
    }

    /// Adds `c e_ij (x) e_kl`; the sign `(-1)^([k]+[l])[j]` comes from the
    /// second factor passing the column state of the first.
    pub fn add(&mut self, c: Complex64, (i, j): (usize, usize), (k, l): (usize, usize)) -> &mut Self {
        let p = |x: usize| self.space.parity_of(x - 1);
        let sign = ((p(k) + p(l)).bit() & p(j).bit()) as i32;
        let s = if sign == 1 { -1.0 } else { 1.0 };
        self.m[((i - 1) * 4 + (k - 1), (j - 1) * 4 + (l - 1))] += c * s;
        self
    }

    /// Adds `c` times each listed `e_ij (x) e_kl`.
    pub fn add_all(&mut self, c: Complex64, terms: &[UnitPair]) -> &mut Self {
        for &(a, b) in terms {
            self.add(c, a, b);
        }
        self
    }

    pub fn into_operator(self) -> GradedOperator {
        GradedOperator::on_unchecked(&self.space.tensor(&self.space), self.m)
    }
}

/// Row-major dump with each complex entry as `[re, im]`.
pub fn dump_matrix(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v() -> GradedSpace {
        GradedSpace::fundamental()
    }

    fn e(i: usize, j: usize) -> GradedOperator {
        GradedOperator::unit(&v(), i - 1, j - 1)
    }

    fn t(a: &GradedOperator, b: &GradedOperator) -> GradedOperator {
        graded_tensor(a, b).unwrap()
    }

    fn ket2(i: usize, j: usize) -> GradedVector {
        GradedVector::basis(&v().tensor(&v()), (i - 1) * 4 + (j - 1))
    }

    #[test]
    fn graded_swap_matches_embedded_permutation() {
        let p = graded_permutation(&v(), &v());
        for (site, len) in [(1, 2), (1, 3), (2, 3), (2, 4)] {
            let dense = embed_two_site(&p, site, len, false).unwrap();
            let s = graded_swap(&v(), site, len).unwrap();
            assert_eq!(max_abs_diff(&s.to_matrix(), dense.matrix()), 0.0);
        }
        assert!(graded_swap(&v(), 3, 3).is_err());
    }

    #[test]
    fn sparse_embedding_matches_dense() {
        let mut h = t(&e(1, 2), &e(2, 1)).matrix().clone();
        h += t(&e(4, 3), &e(1, 2)).matrix() * Complex64::new(0.5, -2.0);
        h += t(&e(2, 2), &e(3, 3)).matrix() * Complex64::new(3.0, 0.0);
        let h = GradedOperator::on(&v().power(2), h).unwrap();
        for len in [2, 3, 4] {
            for site in 1..=len {
                let dense = embed_two_site(&h, site, len, true).unwrap();
                let sparse = embed_two_site_sparse(&h, site, len, true).unwrap();
                assert_eq!(max_abs_diff(&sparse.to_dense(), dense.matrix()), 0.0);
            }
        }
    }

    #[test]
    fn sparse_arithmetic() {
        let a = CMatrix::from_fn(4, 4, |r, c| Complex64::new((r * 4 + c) as f64 % 3.0, r as f64 - c as f64));
        let b = CMatrix::from_fn(4, 4, |r, c| Complex64::new(r as f64, c as f64));
        let sa = SparseOperator::from_dense(&a);
        assert_eq!(sa.to_dense(), a);
        assert!(max_abs_diff(&sa.mul_dense(&b), &(&a * &b)) < 1e-14);
        assert_eq!(sa.adjoint().to_dense(), a.adjoint());
        assert_eq!(sa.max_abs_diff(&sa), 0.0);
        let s = SignedPermutation::new(vec![2, 0, 3, 1], vec![1.0, -1.0, -1.0, 1.0]).unwrap();
        let sm = s.to_matrix();
        assert!(max_abs_diff(&sa.conjugate(&s).to_dense(), &(&sm * &a * sm.adjoint())) < 1e-14);
        assert!(max_abs_diff(&sa.conjugate_inverse(&s).to_dense(), &(sm.adjoint() * &a * &sm)) < 1e-14);
        assert_eq!(sa.block(&[1, 3])[(0, 1)], a[(1, 3)]);
    }

    #[test]
    fn unit_tensor_sum_matches_graded_tensor() {
        for (i, j, k, l) in [(1, 2, 4, 3), (2, 1, 3, 4), (4, 2, 1, 3), (2, 3, 3, 2), (1, 4, 4, 1), (3, 1, 2, 4)] {
            let mut s = UnitTensorSum::new();
            s.add(ONE, (i, j), (k, l));
            assert_eq!(s.into_operator(), t(&e(i, j), &e(k, l)));
        }
    }

    #[test]
    fn fundamental_grading() {
        let bits: Vec<u8> = v().parities().iter().map(|p| p.bit()).collect();
        assert_eq!(bits, vec![0, 1, 1, 0]);
        assert_eq!(v().superdim(), 0.0);
        assert_eq!(e(2, 3).parity(), Some(Parity::Even));
        assert_eq!(e(1, 2).parity(), Some(Parity::Odd));
    }

    #[test]
    fn koszul_product_odd_odd() {
        // e23 = |2><3| is even (both states odd): no sign
        let lhs = &t(&e(2, 3), &e(3, 2)) * &t(&e(3, 2), &e(2, 3));
        assert_eq!(lhs.max_abs_diff(&t(&e(2, 2), &e(3, 3))), 0.0);
        // odd B meets odd C
        let lhs = &t(&e(1, 2), &e(2, 1)) * &t(&e(2, 1), &e(1, 2));
        assert_eq!(lhs.max_abs_diff(&-&t(&e(1, 1), &e(2, 2))), 0.0);
    }

    #[test]
    fn identity_and_projector_products() {
        let id = GradedOperator::identity(&v());
        let ii = t(&id, &id);
        assert_eq!(ii.max_abs_diff(&GradedOperator::identity(&v().power(2))), 0.0);
        let p = t(&e(1, 1), &e(2, 2));
        assert_eq!((&p * &p).max_abs_diff(&p), 0.0);
    }

    #[test]
    fn mixed_parity_rejected() {
        let mixed = &e(1, 1) + &e(1, 2);
        assert_eq!(mixed.parity(), None);
        assert_eq!(graded_tensor(&mixed, &e(1, 1)), Err(Error::Parity));
        assert_eq!(graded_tensor(&e(1, 1), &mixed), Err(Error::Parity));
    }

    #[test]
    fn graded_permutation_examples() {
        let p = graded_permutation(&v(), &v());
        assert_eq!(p.apply(&ket2(1, 4)), ket2(4, 1));
        assert_eq!(p.apply(&ket2(2, 3)), ket2(3, 2).scale(-ONE));
        assert_eq!(p.apply(&ket2(2, 1)), ket2(1, 2));
        let pp = &p * &p;
        assert_eq!(pp.max_abs_diff(&GradedOperator::identity(&v().power(2))), 0.0);
    }

    #[test]
    fn graded_adjoint_examples() {
        let vv = v();
        let d = graded_adjoint(&ket2(1, 1), &vv, &vv).unwrap();
        assert_eq!(d.pair(&ket2(1, 1)), ONE);
        // the covector carries the Koszul sign, the graded evaluation removes it
        let d = graded_adjoint(&ket2(2, 3), &vv, &vv).unwrap();
        assert_eq!(d.coefficient(1, 2), -ONE);
        assert_eq!(d.pair(&ket2(2, 3)), ONE);
        assert_eq!(d.pair(&ket2(3, 2)), ZERO);
        let c = Complex64::new(0.3, -1.2);
        let d = graded_adjoint(&ket2(1, 2).scale(c), &vv, &vv).unwrap();
        assert_eq!(d.coefficient(0, 1), c.conj());
    }

    #[test]
    fn graded_adjoint_involution_on_basis() {
        let vv = v();
        for k in 0..16 {
            let ket = GradedVector::basis(&vv.tensor(&vv), k).scale(Complex64::new(0.5, 2.0));
            let back = graded_adjoint(&ket, &vv, &vv).unwrap().adjoint();
            assert_eq!(back, ket);
        }
    }

    #[test]
    fn embed_examples() {
        let p = graded_permutation(&v(), &v());
        assert_eq!(embed_two_site(&p, 1, 2, false).unwrap(), p);
        let id2 = GradedOperator::identity(&v().power(2));
        for (site, periodic) in [(1, false), (2, false), (3, true)] {
            let op = embed_two_site(&id2, site, 3, periodic).unwrap();
            assert_eq!(op.max_abs_diff(&GradedOperator::identity(&v().power(3))), 0.0);
        }
        // P on sites (1,2) of |v>|w>|u>
        let space3 = v().power(3);
        let p12 = embed_two_site(&p, 1, 3, false).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let out = p12.apply(&GradedVector::basis(&space3, a * 16 + b * 4 + c));
                    let s = v().parity_of(a).koszul(v().parity_of(b));
                    let expected = GradedVector::basis(&space3, b * 16 + a * 4 + c)
                        .scale(Complex64::new(s, 0.0));
                    assert_eq!(out, expected);
                }
            }
        }
    }

    #[test]
    fn embed_errors() {
        let p = graded_permutation(&v(), &v());
        assert!(matches!(embed_two_site(&p, 0, 3, true), Err(Error::Index { .. })));
        assert!(matches!(embed_two_site(&p, 4, 3, true), Err(Error::Index { .. })));
        assert_eq!(embed_two_site(&p, 3, 3, false), Err(Error::Boundary { len: 3 }));
    }

    #[test]
    fn cyclic_shift_matches_product_of_graded_permutations() {
        let p = graded_permutation(&v(), &v());
        for l in 2..=4 {
            let mut dense = GradedOperator::identity(&v().power(l));
            for k in 1..l {
                dense = &dense * &embed_two_site(&p, k, l, false).unwrap();
            }
            let shift = graded_cyclic_shift(&v(), l);
            assert_eq!(max_abs_diff(&shift.to_matrix(), dense.matrix()), 0.0);
        }
    }

    #[test]
    fn wrap_bond_is_translated_first_bond() {
        // shift H_{12} shift^-1 = H_{23}, and the wrap term closes the ring
        let h = &t(&e(1, 2), &e(3, 4)) + &t(&e(2, 1), &e(4, 3));
        let l = 3;
        let shift = graded_cyclic_shift(&v(), l);
        let h12 = embed_two_site(&h, 1, l, false).unwrap();
        let h23 = embed_two_site(&h, 2, l, false).unwrap();
        let h31 = embed_two_site(&h, 3, l, true).unwrap();
        assert!(shift.conjugate(&h12).max_abs_diff(&h23) < 1e-15);
        assert!(shift.conjugate(&h23).max_abs_diff(&h31) < 1e-15);
        assert!(shift.conjugate(&h31).max_abs_diff(&h12) < 1e-15);
    }

    #[test]
    fn supertrace_examples() {
        let x = &e(1, 4) + &e(2, 3).scale(Complex64::new(0.0, 2.0));
        let id = GradedOperator::identity(&v());
        let s = partial_supertrace_aux(&t(&id, &x)).unwrap();
        assert_eq!(s.max_abs(), 0.0);
        let s = partial_supertrace_aux(&t(&e(1, 1), &x)).unwrap();
        assert_eq!(s.max_abs_diff(&x), 0.0);
        let s = partial_supertrace_aux(&t(&e(2, 2), &x)).unwrap();
        assert_eq!(s.max_abs_diff(&-&x), 0.0);
    }

    #[test]
    fn dump_format() {
        let m = e(1, 2).scale(Complex64::new(0.5, -1.0));
        let d = dump_matrix(m.matrix());
        assert_eq!(d.len(), 4);
        assert_eq!(d[0][1], [0.5, -1.0]);
        assert_eq!(d[1][0], [0.0, 0.0]);
    }

    fn homogeneous_op() -> impl Strategy<Value = GradedOperator> {
        (
            proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
            any::<bool>(),
        )
            .prop_map(|(entries, odd)| {
                let space = GradedSpace::fundamental();
                let mut m = CMatrix::zeros(4, 4);
                for r in 0..4 {
                    for c in 0..4 {
                        let p = space.parity_of(r) + space.parity_of(c);
                        if p.is_odd() == odd {
                            let (re, im) = entries[r * 4 + c];
                            m[(r, c)] = Complex64::new(re, im);
                        }
                    }
                }
                GradedOperator::on(&space, m).unwrap()
            })
    }

    fn parity_sign(x: &GradedOperator, y: &GradedOperator) -> Complex64 {
        Complex64::new(x.parity().unwrap().koszul(y.parity().unwrap()), 0.0)
    }

    proptest! {
        #[test]
        fn koszul_consistency(a in homogeneous_op(), b in homogeneous_op(), c in homogeneous_op(), d in homogeneous_op()) {
            let lhs = &t(&a, &b) * &t(&c, &d);
            let rhs = t(&(&a * &c), &(&b * &d)).scale(parity_sign(&b, &c));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn permutation_swaps_factors(a in homogeneous_op(), b in homogeneous_op()) {
            let p = graded_permutation(&v(), &v());
            let lhs = &(&p * &t(&a, &b)) * &p;
            let rhs = t(&b, &a).scale(parity_sign(&a, &b));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn homogeneous_ops_respect_grading(a in homogeneous_op()) {
            let pa = a.parity().unwrap();
            let space = v();
            for r in 0..4 {
                for c in 0..4 {
                    if space.parity_of(r) != space.parity_of(c) + pa {
                        prop_assert_eq!(a.matrix()[(r, c)], ZERO);
                    }
                }
            }
        }
    }
}
