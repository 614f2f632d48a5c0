//! Fixed-precision ℓ-adic arithmetic: Teichmüller representatives, the
//! decomposition `Δ = ε ℓ^b (1 + c)` with `ε ∈ μ_{ℓ−1}`, and the conductor
//! exponent of the Hilbert symbol `(·, Δ)_{ℓ^N}` by its five-case formula.
//! Integer valuations (`b`) are exact; only `c` carries finite precision,
//! and every branch decision records the margin it was resolved with.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PadicError {
    #[error("zero input")]
    ZeroInput,
    #[error("not an ell-adic unit")]
    NotAUnit,
    #[error("precision exhausted: cannot resolve a valuation within {0} digits")]
    PrecisionExhausted(u32),
}

/// Default working precision in base-ℓ digits for level `N`.
pub fn default_precision(n: u32) -> u32 {
    2 * n + 6
}

/// A possibly-unresolved ℓ-adic valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Valuation {
    Finite(i64),
    /// Known only to be `≥` the bound (precision ran out before a nonzero digit).
    AtLeast(i64),
    /// Exactly zero.
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn min(self, other: Valuation) -> Valuation {
        use Valuation::*;
        match (self, other) {
            (Infinite, x) | (x, Infinite) => x,
            (Finite(a), Finite(b)) => Finite(a.min(b)),
            (Finite(a), AtLeast(b)) | (AtLeast(b), Finite(a)) => {
                if a < b {
                    Finite(a)
                } else {
                    // the unresolved side may or may not undercut a
                    AtLeast(a.min(b))
                }
            }
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
        }
    }

    /// Certainly greater than `bound`?  `None` when unresolved.
    pub fn greater_than(self, bound: i64) -> Option<bool> {
        match self {
            Valuation::Infinite => Some(true),
            Valuation::Finite(v) => Some(v > bound),
            Valuation::AtLeast(v) if v > bound => Some(true),
            Valuation::AtLeast(_) => None,
        }
    }
}

/// An ℓ-adic number `ℓ^val · unit` with `unit` known mod `ℓ^prec`
/// (so the value is known mod `ℓ^{val+prec}`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicNumber {
    pub ell: u64,
    pub prec: u32,
    pub val: i64,
    /// Unit part, `< ℓ^prec`, coprime to ℓ; meaningless when `zero`.
    pub unit: BigUint,
    /// Exact zero (`known_to` = i64::MAX) or zero to the stated absolute precision.
    zero: Option<i64>,
}

fn ell_pow(ell: u64, e: u32) -> BigUint {
    BigUint::from(ell).pow(e)
}

fn strip_ell(x: &mut BigUint, ell: u64) -> u32 {
    let ell_b = BigUint::from(ell);
    let mut v = 0u32;
    while !x.is_zero() && (&*x % &ell_b).is_zero() {
        *x /= &ell_b;
        v += 1;
    }
    v
}

pub fn ord_ell_bigint(x: &BigInt, ell: u64) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let mut m = x.magnitude().clone();
    Some(strip_ell(&mut m, ell) as u64)
}

impl PadicNumber {
    pub fn zero(ell: u64, prec: u32) -> Self {
        PadicNumber { ell, prec, val: 0, unit: BigUint::zero(), zero: Some(i64::MAX) }
    }

    /// Zero as far as the digits go: the true value has `ord ≥ known_to`.
    fn unresolved_zero(ell: u64, prec: u32, known_to: i64) -> Self {
        PadicNumber { ell, prec, val: 0, unit: BigUint::zero(), zero: Some(known_to) }
    }

    pub fn from_rational(num: &BigInt, den: &BigInt, ell: u64, prec: u32) -> Result<Self, PadicError> {
        if den.is_zero() {
            return Err(PadicError::ZeroInput);
        }
        if num.is_zero() {
            return Ok(Self::zero(ell, prec));
        }
        let mut n_mag = num.magnitude().clone();
        let mut d_mag = den.magnitude().clone();
        let vn = strip_ell(&mut n_mag, ell) as i64;
        let vd = strip_ell(&mut d_mag, ell) as i64;
        let modulus = ell_pow(ell, prec);
        let n_res = &n_mag % &modulus;
        let d_inv = modinv_big(&(&d_mag % &modulus), &modulus);
        let mut unit = n_res * d_inv % &modulus;
        if num.is_negative() != den.is_negative() {
            unit = &modulus - unit;
        }
        Ok(PadicNumber { ell, prec, val: vn - vd, unit, zero: None })
    }

    pub fn from_int(v: i64, ell: u64, prec: u32) -> Self {
        Self::from_rational(&BigInt::from(v), &BigInt::one(), ell, prec).unwrap()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.zero == Some(i64::MAX)
    }

    pub fn ord(&self) -> Valuation {
        match self.zero {
            Some(i64::MAX) => Valuation::Infinite,
            Some(k) => Valuation::AtLeast(k),
            None => Valuation::Finite(self.val),
        }
    }

    /// Unit digit vector (base ℓ, least significant first), length `prec`.
    pub fn digits(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.prec as usize);
        let ell_b = BigUint::from(self.ell);
        let mut u = self.unit.clone();
        for _ in 0..self.prec {
            out.push((&u % &ell_b).to_u64().unwrap());
            u /= &ell_b;
        }
        out
    }

    pub fn unit_mod_ell(&self) -> u64 {
        (&self.unit % BigUint::from(self.ell)).to_u64().unwrap()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ell, other.ell);
        let prec = self.prec.min(other.prec);
        if self.zero.is_some() || other.zero.is_some() {
            // ord(xy) ≥ ord-bound(x) + ord-bound(y)
            let bound = |p: &PadicNumber| match p.zero {
                Some(i64::MAX) => return i64::MAX,
                Some(k) => k,
                None => p.val,
            };
            let (bx, by) = (bound(self), bound(other));
            if bx == i64::MAX || by == i64::MAX {
                return Self::zero(self.ell, prec);
            }
            return Self::unresolved_zero(self.ell, prec, bx.saturating_add(by));
        }
        let modulus = ell_pow(self.ell, prec);
        PadicNumber {
            ell: self.ell,
            prec,
            val: self.val + other.val,
            unit: &self.unit * &other.unit % modulus,
            zero: None,
        }
    }

    pub fn neg(&self) -> Self {
        if self.zero.is_some() {
            return self.clone();
        }
        let modulus = ell_pow(self.ell, self.prec);
        PadicNumber {
            ell: self.ell,
            prec: self.prec,
            val: self.val,
            unit: &modulus - &self.unit,
            zero: None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ell, other.ell);
        if self.is_exact_zero() {
            return other.clone();
        }
        if other.is_exact_zero() {
            return self.clone();
        }
        // absolute precision of each operand
        let abs = |p: &PadicNumber| match p.zero {
            Some(k) => k,
            None => p.val.saturating_add(p.prec as i64),
        };
        let known_to = abs(self).min(abs(other));
        let floor = |p: &PadicNumber| match p.zero {
            Some(k) => k,
            None => p.val,
        };
        let v = floor(self).min(floor(other));
        let digits = (known_to - v).max(0) as u32;
        if digits == 0 {
            return Self::unresolved_zero(self.ell, self.prec.min(other.prec), known_to);
        }
        let modulus = ell_pow(self.ell, digits);
        let mut acc = BigUint::zero();
        for p in [self, other] {
            if p.zero.is_none() {
                let shift = (p.val - v) as u32;
                if shift < digits {
                    acc = (acc + &p.unit * ell_pow(p.ell, shift)) % &modulus;
                }
            }
        }
        if acc.is_zero() {
            return Self::unresolved_zero(self.ell, self.prec.min(other.prec), known_to);
        }
        let k = strip_ell(&mut acc, self.ell);
        let prec_out = digits - k; // remaining known unit digits
        PadicNumber {
            ell: self.ell,
            prec: prec_out,
            val: v + k as i64,
            unit: acc % ell_pow(self.ell, prec_out),
            zero: None,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

fn modinv_big(a: &BigUint, modulus: &BigUint) -> BigUint {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(modulus.clone());
    let e = a.extended_gcd(&m);
    assert!(e.gcd.is_one(), "inverse requires a unit");
    e.x.mod_floor(&m).to_biguint().unwrap()
}

/// Teichmüller representative: the fixed point of `x ↦ x^ℓ` congruent to `u`
/// mod ℓ, to the unit's precision.
pub fn teichmuller(u: &PadicNumber) -> Result<PadicNumber, PadicError> {
    if u.zero.is_some() || u.val != 0 {
        return Err(PadicError::NotAUnit);
    }
    let modulus = ell_pow(u.ell, u.prec);
    let mut t = u.unit.clone() % &modulus;
    for _ in 0..=u.prec {
        let next = t.modpow(&BigUint::from(u.ell), &modulus);
        if next == t {
            break;
        }
        t = next;
    }
    debug_assert_eq!(t.modpow(&BigUint::from(u.ell), &modulus), t);
    Ok(PadicNumber { ell: u.ell, prec: u.prec, val: 0, unit: t, zero: None })
}

/// `Δ = ε ℓ^b (1 + c)` with `ε ∈ μ_{ℓ−1}`, `b = ord_ℓ(Δ)`, `ord_ℓ(c) ≥ 1`,
/// and `w = min(ord_ℓ(b), ord_ℓ(c))`.
#[derive(Debug, Clone)]
pub struct PadicDecomposition {
    pub ell: u64,
    pub prec: u32,
    pub b: i64,
    /// `ε mod ℓ` (determines ε as a root of unity).
    pub epsilon_residue: u64,
    pub epsilon: PadicNumber,
    pub c: PadicNumber,
    pub c_ord: Valuation,
    pub c_unit_mod_ell: Option<u64>,
    pub w: Valuation,
    /// `ord_ℓ(b + c)`, needed by the conductor case split.
    pub bc_ord: Valuation,
}

/// Decompose a nonzero rational.
pub fn decompose(num: &BigInt, den: &BigInt, ell: u64, prec: u32) -> Result<PadicDecomposition, PadicError> {
    if num.is_zero() || den.is_zero() {
        return Err(PadicError::ZeroInput);
    }
    let x = PadicNumber::from_rational(num, den, ell, prec)?;
    // c = 0 exactly iff the unit part of x is ±1 in Q, i.e. x = ±ℓ^b
    let exact_root_of_unity = {
        let mut n_mag = num.magnitude().clone();
        let mut d_mag = den.magnitude().clone();
        strip_ell(&mut n_mag, ell);
        strip_ell(&mut d_mag, ell);
        n_mag == d_mag
    };
    decompose_unit_part(x, exact_root_of_unity)
}

/// Decompose when the unit part is already known mod `ℓ^prec`.
/// `unit_is_exact_teichmuller` marks the (rare, detectable) case `x = ±ℓ^b`.
pub fn decompose_unit_part(
    x: PadicNumber,
    unit_is_exact_teichmuller: bool,
) -> Result<PadicDecomposition, PadicError> {
    let ell = x.ell;
    let prec = x.prec;
    let b = x.val;
    let unit = PadicNumber { val: 0, ..x.clone() };
    let epsilon = teichmuller(&unit)?;
    let modulus = ell_pow(ell, prec);
    let eps_inv = modinv_big(&epsilon.unit, &modulus);
    let one_plus_c = &unit.unit * eps_inv % &modulus;
    let c = if unit_is_exact_teichmuller {
        debug_assert!(one_plus_c.is_one());
        PadicNumber::zero(ell, prec)
    } else {
        let mut rest = (one_plus_c + &modulus - BigUint::one()) % &modulus;
        if rest.is_zero() {
            PadicNumber::unresolved_zero(ell, prec, prec as i64)
        } else {
            let k = strip_ell(&mut rest, ell);
            PadicNumber { ell, prec: prec - k, val: k as i64, unit: rest, zero: None }
        }
    };
    let c_ord = c.ord();
    let c_unit_mod_ell = match c_ord {
        Valuation::Finite(_) => Some(c.unit_mod_ell()),
        _ => None,
    };
    let b_ord = if b == 0 {
        Valuation::Infinite
    } else {
        Valuation::Finite(ord_ell_bigint(&BigInt::from(b), ell).unwrap() as i64)
    };
    let w = b_ord.min(c_ord);
    let bc_ord = PadicNumber::from_int(b, ell, prec).add(&c).ord();
    Ok(PadicDecomposition {
        ell,
        prec,
        b,
        epsilon_residue: epsilon.unit_mod_ell(),
        epsilon,
        c,
        c_ord,
        c_unit_mod_ell,
        w,
        bc_ord,
    })
}

/// Conductor exponent of the Hilbert symbol `(·, Δ)_{ℓ^N}` together with the
/// precision margin the decision was made with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HilbertConductor {
    pub exponent: u64,
    pub margin: i64,
}

pub fn hilbert_conductor(dec: &PadicDecomposition, n: u32) -> Result<HilbertConductor, PadicError> {
    let ell = dec.ell;
    let nn = n as i64;
    let prec = dec.prec as i64;
    let fail = || PadicError::PrecisionExhausted(dec.prec);
    match dec.w {
        Valuation::Finite(0) => Ok(HilbertConductor {
            exponent: ell.pow(n - 1) * (ell + 1),
            margin: prec,
        }),
        Valuation::Finite(w) if w >= 1 && w < nn => {
            // need ord(b+c) compared against w
            match dec.bc_ord {
                Valuation::Finite(v) if v == w => Ok(HilbertConductor {
                    exponent: 2 * ell.pow((nn - w) as u32),
                    margin: prec - v,
                }),
                Valuation::Finite(v) if v > w => Ok(HilbertConductor {
                    exponent: ell.pow((nn - w - 1) as u32) * (ell - 1),
                    margin: prec - w,
                }),
                Valuation::AtLeast(a) if a > w => Ok(HilbertConductor {
                    exponent: ell.pow((nn - w - 1) as u32) * (ell - 1),
                    margin: a - w,
                }),
                _ => Err(fail()),
            }
        }
        Valuation::Finite(w) if w == nn => match dec.c_ord {
            Valuation::Finite(v) if v == nn => Ok(HilbertConductor { exponent: 2, margin: prec - v }),
            Valuation::Finite(_) | Valuation::Infinite => {
                Ok(HilbertConductor { exponent: 0, margin: prec - nn })
            }
            Valuation::AtLeast(a) if a > nn => Ok(HilbertConductor { exponent: 0, margin: a - nn }),
            Valuation::AtLeast(_) => Err(fail()),
        },
        Valuation::Finite(w) => {
            debug_assert!(w > nn);
            Ok(HilbertConductor { exponent: 0, margin: prec - nn })
        }
        Valuation::Infinite => Ok(HilbertConductor { exponent: 0, margin: prec }),
        Valuation::AtLeast(a) if a > nn => Ok(HilbertConductor { exponent: 0, margin: a - nn }),
        Valuation::AtLeast(_) => Err(fail()),
    }
}
