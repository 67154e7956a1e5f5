//! q-number arithmetic and validation of the deformation and representation
//! parameters.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Real deformation parameter `q > 0`, `q != 1`.
///
/// `q = 1` is the rational theory, which has its own code path
/// ([`crate::rmatrix::r_rational`]); values arbitrarily close to 1 are accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParams {
    q: f64,
}

impl QParams {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 || q == 1.0 {
            return Err(Error::InvalidQ(q));
        }
        Ok(Self { q })
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }

    #[inline]
    pub fn ln_q(&self) -> f64 {
        self.q.ln()
    }

    /// `q^x` evaluated as `exp(x ln q)`, valid for non-integer `x`.
    #[inline]
    pub fn pow(&self, x: f64) -> f64 {
        (x * self.ln_q()).exp()
    }

    /// `[x]_q`.
    #[inline]
    pub fn number(&self, x: f64) -> f64 {
        q_number(x, *self)
    }
}

/// `[x]_q = (q^x - q^-x) / (q - q^-1)`.
///
/// Written as `sinh(x ln q) / sinh(ln q)`, which is the same quotient without
/// the cancellation that the plain difference suffers when `q` is close to 1.
pub fn q_number(x: f64, params: QParams) -> f64 {
    let l = params.ln_q();
    (x * l).sinh() / l.sinh()
}

/// Unitarity window of a representation label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnitarityClass {
    /// `alpha > 0`: `(E^i_j)^dag = E^j_i`.
    TypeI,
    /// `alpha < -1`: `(E^i_j)^dag = (-1)^([i]+[j]) E^j_i`.
    TypeII,
}

pub fn classify(alpha: f64) -> Result<UnitarityClass> {
    if alpha > 0.0 {
        Ok(UnitarityClass::TypeI)
    } else if alpha < -1.0 {
        Ok(UnitarityClass::TypeII)
    } else {
        // NaN lands here as well
        Err(Error::NonUnitaryRange(alpha))
    }
}

/// Highest-weight parameter `alpha` of the irrep `V(0,0|alpha)`, restricted to
/// one of the two unitary windows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReprLabel {
    alpha: f64,
    class: UnitarityClass,
}

impl ReprLabel {
    pub fn new(alpha: f64) -> Result<Self> {
        let class = classify(alpha)?;
        Ok(Self { alpha, class })
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn class(&self) -> UnitarityClass {
        self.class
    }

    /// `sign(alpha)` as `+1.0` or `-1.0`.
    #[inline]
    pub fn sign(&self) -> f64 {
        match self.class {
            UnitarityClass::TypeI => 1.0,
            UnitarityClass::TypeII => -1.0,
        }
    }
}

/// `sign(alpha) * sqrt([alpha + shift]_q / [alpha]_q)`.
///
/// Real in both unitary windows; a negative radicand means the parameters sit
/// outside them and is reported as a domain error.
pub fn signed_sqrt_ratio(alpha: f64, shift: f64, params: QParams) -> Result<f64> {
    let den = q_number(alpha, params);
    let ratio = q_number(alpha + shift, params) / den;
    if !ratio.is_finite() || ratio < 0.0 {
        return Err(Error::Domain(format!(
            "[{}]_q / [{}]_q = {ratio} is negative; alpha must lie in a unitary window",
            alpha + shift,
            alpha
        )));
    }
    Ok(alpha.signum() * ratio.sqrt())
}

/// Principal-branch square root of a real number, `i sqrt(|x|)` for `x < 0`.
///
/// Square roots of products of q-numbers are always taken factor by factor with
/// this branch, `sqrt(xy) := sqrt(x) sqrt(y)`; in the type II window this is
/// what makes the R-matrix satisfy the Yang-Baxter equation.
#[inline]
pub fn principal_sqrt(x: f64) -> Complex64 {
    if x >= 0.0 {
        Complex64::new(x.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-x).sqrt())
    }
}

/// Product of principal square roots of the given factors.
pub fn sqrt_product(factors: &[f64]) -> Complex64 {
    factors
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, &x| acc * principal_sqrt(x))
}
