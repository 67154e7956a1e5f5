//! The one-parameter family of 4-dimensional irreps `V(0,0|alpha)` of
//! `U_q(gl(2|1))` and the coproduct action on two-fold tensor products.
//!
//! Only the seven generators that enter the coproduct formulas are modelled.
//! Matrix entries `sqrt([alpha]_q)`, `sqrt([alpha+1]_q)` use the principal
//! branch, so in the type II window the odd generators are purely imaginary;
//! everything observable built from them (R-matrices, Hamiltonians) comes out
//! real.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qdeform::{principal_sqrt, QParams, ReprLabel};
use crate::superlinalg::{graded_permutation, graded_tensor, GradedOperator, GradedSpace, Parity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorLabel {
    E11,
    E22,
    E33,
    E12,
    E21,
    E23,
    E32,
}

impl GeneratorLabel {
    pub const ALL: [GeneratorLabel; 7] = [
        GeneratorLabel::E11,
        GeneratorLabel::E22,
        GeneratorLabel::E33,
        GeneratorLabel::E12,
        GeneratorLabel::E21,
        GeneratorLabel::E23,
        GeneratorLabel::E32,
    ];

    /// `E^upper_lower`.
    pub fn from_indices(upper: usize, lower: usize) -> Result<Self> {
        use GeneratorLabel::*;
        Ok(match (upper, lower) {
            (1, 1) => E11,
            (2, 2) => E22,
            (3, 3) => E33,
            (1, 2) => E12,
            (2, 1) => E21,
            (2, 3) => E23,
            (3, 2) => E32,
            _ => return Err(Error::UnsupportedGenerator(upper, lower)),
        })
    }

    /// `(upper, lower)`.
    pub fn indices(self) -> (usize, usize) {
        use GeneratorLabel::*;
        match self {
            E11 => (1, 1),
            E22 => (2, 2),
            E33 => (3, 3),
            E12 => (1, 2),
            E21 => (2, 1),
            E23 => (2, 3),
            E32 => (3, 2),
        }
    }

    /// `[E^i_j] = ([i] + [j]) mod 2` with `[1] = [2] = 0`, `[3] = 1`.
    pub fn parity(self) -> Parity {
        let (i, j) = self.indices();
        let grade = |k: usize| Parity::from_bit(u8::from(k == 3));
        grade(i) + grade(j)
    }

    pub fn is_cartan(self) -> bool {
        let (i, j) = self.indices();
        i == j
    }

    pub fn name(self) -> String {
        let (i, j) = self.indices();
        format!("E^{i}_{j}")
    }

    fn slot(self) -> usize {
        self as usize
    }
}

/// `pi_alpha` on `V(0,0|alpha)`.
#[derive(Debug, Clone)]
pub struct Irrep {
    label: ReprLabel,
    params: QParams,
    matrices: [GradedOperator; 7],
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl Irrep {
    pub fn new(label: ReprLabel, params: QParams) -> Self {
        let v = GradedSpace::fundamental();
        let a = label.alpha();
        let e = |i: usize, j: usize, c: Complex64| GradedOperator::unit(&v, i - 1, j - 1).scale(c);
        let s0 = principal_sqrt(params.number(a));
        let s1 = principal_sqrt(params.number(a + 1.0));
        let diag = |d: [f64; 4]| {
            GradedOperator::diagonal(&v, &d.map(real)).expect("4x4 diagonal")
        };

        let e12 = e(2, 3, real(1.0));
        let e21 = e(3, 2, real(1.0));
        let e11 = diag([0.0, 0.0, -1.0, -1.0]);
        let e22 = diag([0.0, -1.0, 0.0, -1.0]);
        let e23 = &e(1, 2, s0) + &e(3, 4, s1);
        let e32 = &e(2, 1, s0) + &e(4, 3, s1);
        let e33 = diag([a, a + 1.0, a + 1.0, a + 2.0]);

        Self {
            label,
            params,
            matrices: [e11, e22, e33, e12, e21, e23, e32],
        }
    }

    pub fn label(&self) -> ReprLabel {
        self.label
    }

    pub fn params(&self) -> QParams {
        self.params
    }

    pub fn get(&self, g: GeneratorLabel) -> &GradedOperator {
        &self.matrices[g.slot()]
    }

    /// `q^(sign * h / 2)` for the Cartan combination `h` that dresses the
    /// coproduct of the off-diagonal generator `g`:
    /// `E^1_1 - E^2_2` for `E^1_2, E^2_1` and `E^2_2 + E^3_3` for `E^2_3, E^3_2`.
    fn dressing(&self, g: GeneratorLabel, sign: f64) -> GradedOperator {
        use GeneratorLabel::*;
        let (x, y, s) = match g {
            E12 | E21 => (E11, E22, -1.0),
            E23 | E32 => (E22, E33, 1.0),
            _ => unreachable!("Cartan generators have a primitive coproduct"),
        };
        let hx = self.get(x).matrix();
        let hy = self.get(y).matrix();
        let d: Vec<Complex64> = (0..4)
            .map(|k| real(self.params.pow(0.5 * sign * (hx[(k, k)].re + s * hy[(k, k)].re))))
            .collect();
        GradedOperator::diagonal(&GradedSpace::fundamental(), &d).expect("4x4 diagonal")
    }
}

pub fn build_irrep(alpha: f64, params: QParams) -> Result<Irrep> {
    Ok(Irrep::new(ReprLabel::new(alpha)?, params))
}

/// `(pi_left (x) pi_right) Delta(g)` on `V(left) (x) V(right)`.
pub fn coproduct(g: GeneratorLabel, left: &Irrep, right: &Irrep) -> GradedOperator {
    let v = GradedSpace::fundamental();
    let id = GradedOperator::identity(&v);
    let t = |a: &GradedOperator, b: &GradedOperator| {
        graded_tensor(a, b).expect("generators and dressings are homogeneous")
    };
    if g.is_cartan() {
        &t(&id, right.get(g)) + &t(left.get(g), &id)
    } else {
        &t(left.get(g), &right.dressing(g, -1.0)) + &t(&left.dressing(g, 1.0), right.get(g))
    }
}

/// `Delta^{alpha beta}(g) = (pi_alpha (x) pi_beta) Delta(g)`.
pub fn coproduct_action(g: GeneratorLabel, alpha: ReprLabel, beta: ReprLabel, params: QParams) -> GradedOperator {
    coproduct(g, &Irrep::new(alpha, params), &Irrep::new(beta, params))
}

/// Opposite coproduct `(pi_beta (x) pi_alpha)(T . Delta)(g)` on
/// `V(beta) (x) V(alpha)`, i.e. `P Delta^{alpha beta}(g) P^-1`.
pub fn opposite_coproduct_action(
    g: GeneratorLabel,
    alpha: ReprLabel,
    beta: ReprLabel,
    params: QParams,
) -> GradedOperator {
    let v = GradedSpace::fundamental();
    let p = graded_permutation(&v, &v);
    &(&p * &coproduct_action(g, alpha, beta, params)) * &p
}
