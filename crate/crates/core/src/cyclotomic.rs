//! Exact cyclotomic integers in `Z[ζ_{ℓ^m}]`, reduced against the cyclotomic
//! polynomial `Φ_{ℓ^m}(x) = Σ_{i<ℓ} x^{i ℓ^{m−1}}`, with Galois action, norm,
//! trace, `(1−ζ)`-adic valuation, complex embeddings, and exact Jacobi sums.
//! Gauss sums are floating-point only (they live in `Z[ζ_{ℓ^m}, ζ_p]`) and
//! feed property tests, never exported results.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::field::{FieldError, MultChar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycError {
    #[error("conductors differ: ell^{0} vs ell^{1}")]
    ConductorMismatch(u32, u32),
    #[error("galois exponent must be a unit mod ell^m")]
    NotAUnit,
    #[error("character is trivial")]
    TrivialCharacter,
    #[error("product character is trivial")]
    TrivialProduct,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An element of `Z[ζ_{ℓ^m}]` as a coefficient vector of length `φ(ℓ^m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycInt {
    pub ell: u64,
    pub m: u32,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn phi(ell: u64, m: u32) -> usize {
        ((ell - 1) * ell.pow(m - 1)) as usize
    }

    pub fn zero(ell: u64, m: u32) -> Self {
        CycInt { ell, m, coeffs: vec![BigInt::zero(); Self::phi(ell, m)] }
    }

    pub fn from_int(ell: u64, m: u32, v: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(ell, m);
        z.coeffs[0] = v.into();
        z
    }

    pub fn one(ell: u64, m: u32) -> Self {
        Self::from_int(ell, m, 1)
    }

    /// `ζ^e` for any exponent `e` (reduced mod `ℓ^m` and against `Φ`).
    pub fn root_power(ell: u64, m: u32, e: u64) -> Self {
        let l_m = ell.pow(m);
        let mut buf = vec![BigInt::zero(); l_m as usize];
        buf[(e % l_m) as usize] = BigInt::one();
        Self::reduce(ell, m, buf)
    }

    /// Collapse a full power vector (index = exponent of ζ, length `ℓ^m`)
    /// into the canonical basis.
    pub fn from_power_vector(ell: u64, m: u32, buf: Vec<BigInt>) -> Self {
        assert_eq!(buf.len(), ell.pow(m) as usize);
        Self::reduce(ell, m, buf)
    }

    fn reduce(ell: u64, m: u32, mut buf: Vec<BigInt>) -> Self {
        let lm1 = ell.pow(m - 1) as usize;
        let phi = Self::phi(ell, m);
        for e in (phi..buf.len()).rev() {
            if buf[e].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut buf[e]);
            let u = e - phi;
            for i in 0..(ell - 1) as usize {
                buf[u + i * lm1] -= &c;
            }
        }
        buf.truncate(phi);
        CycInt { ell, m, coeffs: buf }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `Some(c)` when the element is the rational integer `c`.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check_compat(&self, other: &Self) -> Result<(), CycError> {
        if self.ell != other.ell || self.m != other.m {
            return Err(CycError::ConductorMismatch(self.m, other.m));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compat(other).expect("conductor mismatch");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CycInt { ell: self.ell, m: self.m, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compat(other).expect("conductor mismatch");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        CycInt { ell: self.ell, m: self.m, coeffs }
    }

    pub fn neg(&self) -> Self {
        CycInt { ell: self.ell, m: self.m, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycInt { ell: self.ell, m: self.m, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compat(other).expect("conductor mismatch");
        let l_m = self.ell.pow(self.m) as usize;
        let mut buf = vec![BigInt::zero(); l_m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut e = i + j;
                if e >= l_m {
                    e -= l_m;
                }
                buf[e] += a * b;
            }
        }
        Self::reduce(self.ell, self.m, buf)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.ell, self.m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `σ_a : ζ ↦ ζ^a` for `gcd(a, ℓ) = 1`.
    pub fn galois_conjugate(&self, a: u64) -> Result<Self, CycError> {
        if a % self.ell == 0 {
            return Err(CycError::NotAUnit);
        }
        let l_m = self.ell.pow(self.m);
        let mut buf = vec![BigInt::zero(); l_m as usize];
        for (e, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let target = ((e as u128 * a as u128) % l_m as u128) as usize;
                buf[target] += c;
            }
        }
        Ok(Self::reduce(self.ell, self.m, buf))
    }

    /// Exact trace to `Q`, computed linearly from
    /// `Tr(ζ^e) = φ(ℓ^m)` at `e = 0`, `−ℓ^{m−1}` when `ℓ^{m−1} ∥ e`, else 0.
    pub fn trace(&self) -> BigInt {
        let lm1 = self.ell.pow(self.m - 1) as usize;
        let phi = Self::phi(self.ell, self.m);
        let mut t = &self.coeffs[0] * BigInt::from(phi);
        for k in 1..(self.ell - 1) as usize {
            t -= &self.coeffs[k * lm1] * BigInt::from(lm1);
        }
        t
    }

    /// Exact absolute norm, as the resultant of `Φ_{ℓ^m}` with the coefficient
    /// polynomial.
    pub fn norm(&self) -> BigInt {
        let phi_poly = cyclotomic_poly(self.ell, self.m);
        let f: Vec<BigRational> =
            self.coeffs.iter().map(|c| BigRational::from(c.clone())).collect();
        let r = resultant(&phi_poly, &f);
        assert!(r.is_integer(), "resultant of integer polynomials is an integer");
        r.to_integer()
    }

    /// Product of all Galois conjugates; equals the norm (used as a
    /// cross-check oracle for the resultant route).
    pub fn norm_by_conjugates(&self) -> BigInt {
        let l_m = self.ell.pow(self.m);
        let mut acc = Self::one(self.ell, self.m);
        for a in 1..l_m {
            if a % self.ell != 0 {
                acc = acc.mul(&self.galois_conjugate(a).unwrap());
            }
        }
        acc.as_integer().expect("norm is a rational integer")
    }

    /// Valuation at the unique prime `(1 − ζ)` above ℓ: `ord_ℓ(N(x))`.
    /// `None` encodes `+∞` (the zero element).
    pub fn pi_prime_valuation(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut n = self.norm().abs();
        let ell = BigInt::from(self.ell);
        let mut v = 0u64;
        while (&n % &ell).is_zero() {
            n /= &ell;
            v += 1;
        }
        Some(v)
    }

    /// Evaluate at `ζ = e^{2πih/ℓ^m}` in double precision.
    pub fn complex_embed(&self, h: u64) -> Complex64 {
        let l_m = self.ell.pow(self.m);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = TAU * ((h as u128 * e as u128 % l_m as u128) as f64) / l_m as f64;
            acc += c.to_f64().expect("coefficient fits f64 range")
                * Complex64::new(angle.cos(), angle.sin());
        }
        acc
    }

    /// Reinterpret in the larger ring `Z[ζ_{ℓ^{m2}}]` via `ζ_{ℓ^m} = ζ_{ℓ^{m2}}^{ℓ^{m2−m}}`.
    pub fn to_conductor(&self, m2: u32) -> Self {
        assert!(m2 >= self.m);
        if m2 == self.m {
            return self.clone();
        }
        let scale = self.ell.pow(m2 - self.m);
        let l_m2 = self.ell.pow(m2);
        let mut buf = vec![BigInt::zero(); l_m2 as usize];
        for (e, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                buf[(e as u64 * scale % l_m2) as usize] += c;
            }
        }
        Self::reduce(self.ell, m2, buf)
    }
}

/// `Φ_{ℓ^m}` as a dense rational-coefficient vector.
fn cyclotomic_poly(ell: u64, m: u32) -> Vec<BigRational> {
    let lm1 = ell.pow(m - 1) as usize;
    let phi = CycInt::phi(ell, m);
    let mut f = vec![BigRational::zero(); phi + 1];
    for i in 0..ell as usize {
        f[i * lm1] = BigRational::one();
    }
    f
}

fn poly_deg(f: &[BigRational]) -> Option<usize> {
    f.iter().rposition(|c| !c.is_zero())
}

/// Resultant by the Euclidean recursion over `Q[x]`, exact.
fn resultant(a: &[BigRational], b: &[BigRational]) -> BigRational {
    let da = match poly_deg(a) {
        Some(d) => d,
        None => return BigRational::zero(),
    };
    let db = match poly_deg(b) {
        Some(d) => d,
        None => return BigRational::zero(),
    };
    if db == 0 {
        return b[0].clone().pow(da as i32);
    }
    if da == 0 {
        return a[0].clone().pow(db as i32);
    }
    // a = qb + r
    let mut r = a[..=da].to_vec();
    let lc_b = b[db].clone();
    while let Some(dr) = poly_deg(&r) {
        if dr < db {
            break;
        }
        let coef = &r[dr] / &lc_b;
        let shift = dr - db;
        for k in 0..=db {
            let sub = &coef * &b[k];
            r[shift + k] -= sub;
        }
        r[dr] = BigRational::zero();
    }
    let dr = poly_deg(&r);
    let sign = if (da % 2 == 1) && (db % 2 == 1) { -BigRational::one() } else { BigRational::one() };
    match dr {
        None => BigRational::zero(),
        Some(dr) => sign * lc_b.pow((da - dr) as i32) * resultant(&b[..=db], &r[..=dr]),
    }
}

/// Exact Jacobi sum `J(χ_a, χ_b) = Σ_{x≠0,1} χ_a(x) χ_b(1−x)` as an element
/// of `Z[ζ_{ℓ^t}]`, `t = max(t_a, t_b)`.
pub fn jacobi_sum(chi_a: &MultChar, chi_b: &MultChar) -> Result<CycInt, CycError> {
    if !Arc::ptr_eq(&chi_a.field, &chi_b.field) || chi_a.ell != chi_b.ell {
        return Err(CycError::Field(FieldError::FieldMismatch));
    }
    if chi_a.is_trivial() || chi_b.is_trivial() {
        return Err(CycError::TrivialCharacter);
    }
    let ell = chi_a.ell;
    let t = chi_a.t.max(chi_b.t);
    let m = ell.pow(t);
    let fa = chi_a.log_image % chi_a.modulus() * ell.pow(t - chi_a.t);
    let fb = chi_b.log_image % chi_b.modulus() * ell.pow(t - chi_b.t);
    if (fa + fb) % m == 0 {
        return Err(CycError::TrivialProduct);
    }
    let field = &chi_a.field;
    let table = field.log_table()?;
    let one_idx = field.index_of(&field.one());
    let mut counts = vec![0u64; m as usize];
    for x_idx in 1..field.q {
        if x_idx == one_idx {
            continue;
        }
        let x = field.elem_from_index(x_idx);
        let y = field.sub_elems(&field.one(), &x);
        let lx = table[x_idx as usize] as u128;
        let ly = table[field.index_of(&y) as usize] as u128;
        let e = (fa as u128 * lx + fb as u128 * ly) % m as u128;
        counts[e as usize] += 1;
    }
    let buf = counts.into_iter().map(BigInt::from).collect();
    Ok(CycInt::from_power_vector(ell, t, buf))
}

/// Floating-point Gauss sum `G(χ) = Σ_{x≠0} χ(x) ψ(x)` with
/// `ψ(x) = e^{2πi Tr(x)/p}`.
pub fn gauss_sum_complex(chi: &MultChar) -> Result<Complex64, CycError> {
    if chi.is_trivial() {
        return Err(CycError::TrivialCharacter);
    }
    let field = &chi.field;
    field.check_budget()?;
    let m = chi.modulus();
    let mut acc = Complex64::new(0.0, 0.0);
    for x_idx in 1..field.q {
        let x = field.elem_from_index(x_idx);
        let e = chi.eval_exp(&x)?;
        let tr = field.trace_to_prime(&x);
        let angle = TAU * (e as f64 / m as f64 + tr as f64 / field.p as f64);
        acc += Complex64::new(angle.cos(), angle.sin());
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;

    #[test]
    fn ring_laws_spot() {
        let x = CycInt::root_power(3, 2, 1).add(&CycInt::from_int(3, 2, 2));
        let y = CycInt::root_power(3, 2, 5).sub(&CycInt::root_power(3, 2, 2));
        let lhs = x.add(&y).mul(&x.add(&y));
        let rhs = x
            .mul(&x)
            .add(&x.mul(&y).scale(&BigInt::from(2)))
            .add(&y.mul(&y));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn root_power_order() {
        let z = CycInt::root_power(3, 2, 1);
        assert_eq!(z.pow(9), CycInt::one(3, 2));
        assert_ne!(z.pow(3), CycInt::one(3, 2));
    }

    #[test]
    fn trace_examples() {
        // Q(ζ_9)/Q has degree 6
        assert_eq!(CycInt::one(3, 2).trace(), BigInt::from(6));
        assert_eq!(CycInt::root_power(3, 2, 3).trace(), BigInt::from(-3));
        assert_eq!(CycInt::root_power(3, 2, 1).trace(), BigInt::zero());
        assert_eq!(CycInt::root_power(3, 2, 6).trace(), BigInt::from(-3));
    }

    #[test]
    fn trace_matches_conjugate_sum() {
        let x = CycInt::root_power(5, 1, 1)
            .scale(&BigInt::from(3))
            .add(&CycInt::root_power(5, 1, 3))
            .add(&CycInt::from_int(5, 1, -7));
        let mut sum = CycInt::zero(5, 1);
        for a in 1..5 {
            sum = sum.add(&x.galois_conjugate(a).unwrap());
        }
        assert_eq!(sum.as_integer().unwrap(), x.trace());
    }

    #[test]
    fn norm_examples() {
        for (ell, m) in [(3u64, 1u32), (3, 2), (5, 1), (7, 1), (5, 2)] {
            let one_minus_zeta = CycInt::one(ell, m).sub(&CycInt::root_power(ell, m, 1));
            assert_eq!(one_minus_zeta.norm(), BigInt::from(ell));
            assert_eq!(one_minus_zeta.norm_by_conjugates(), BigInt::from(ell));
        }
    }

    #[test]
    fn norm_resultant_vs_conjugates() {
        let x = CycInt::root_power(3, 2, 1)
            .scale(&BigInt::from(2))
            .add(&CycInt::root_power(3, 2, 4))
            .sub(&CycInt::from_int(3, 2, 5));
        assert_eq!(x.norm(), x.norm_by_conjugates());
        let y = CycInt::root_power(7, 1, 3).add(&CycInt::from_int(7, 1, 2));
        assert_eq!(y.norm(), y.norm_by_conjugates());
    }

    #[test]
    fn galois_composition() {
        let x = CycInt::root_power(3, 2, 1)
            .add(&CycInt::root_power(3, 2, 5).scale(&BigInt::from(4)));
        assert_eq!(x.galois_conjugate(1).unwrap(), x);
        for (a, b) in [(2u64, 5u64), (4, 7), (5, 8)] {
            let ab = a * b % 9;
            assert_eq!(
                x.galois_conjugate(a).unwrap().galois_conjugate(b).unwrap(),
                x.galois_conjugate(ab).unwrap()
            );
        }
        assert_eq!(x.galois_conjugate(3).unwrap_err(), CycError::NotAUnit);
    }

    #[test]
    fn pi_prime_valuation_examples() {
        let one_minus_zeta = CycInt::one(3, 2).sub(&CycInt::root_power(3, 2, 1));
        assert_eq!(one_minus_zeta.pi_prime_valuation(), Some(1));
        assert_eq!(CycInt::from_int(3, 2, 3).pi_prime_valuation(), Some(6));
        assert_eq!(CycInt::zero(3, 2).pi_prime_valuation(), None);
        assert_eq!(CycInt::from_int(3, 2, 14).pi_prime_valuation(), Some(0));
    }

    #[test]
    fn jacobi_cubic_on_f7() {
        let f7 = FiniteField::build(7, 1).unwrap();
        let chi = MultChar::canonical(Arc::clone(&f7), 3, 1).unwrap();
        let j = jacobi_sum(&chi, &chi).unwrap();
        // Weil bound: |J|^2 = q on every embedding
        for h in [1u64, 2] {
            let v = j.complex_embed(h);
            assert!((v.norm_sqr() - 7.0).abs() < 1e-9);
        }
        // symmetric in the two characters
        let chi2 = chi.power(2);
        assert_eq!(jacobi_sum(&chi, &chi2).unwrap(), jacobi_sum(&chi2, &chi).unwrap());
        // norm is a power of q up to sign
        let n = j.norm().abs();
        assert!(n == BigInt::from(7) || n == BigInt::from(49));
    }

    #[test]
    fn jacobi_trivial_rejections() {
        let f7 = FiniteField::build(7, 1).unwrap();
        let chi = MultChar::canonical(Arc::clone(&f7), 3, 1).unwrap();
        let triv = chi.power(3);
        assert_eq!(jacobi_sum(&triv, &chi).unwrap_err(), CycError::TrivialCharacter);
        // chi * chi^2 is trivial
        assert_eq!(jacobi_sum(&chi, &chi.power(2)).unwrap_err(), CycError::TrivialProduct);
    }

    #[test]
    fn jacobi_congruent_minus_one_mod_pi_squared() {
        // J(chi^a, chi^b) ≡ −1 mod (1−ζ)^2 whenever ell ∤ a+b
        for (q_p, q_n, ell, t) in [(7u64, 1u32, 3u64, 1u32), (13, 1, 3, 1), (19, 1, 3, 2), (11, 1, 5, 1)] {
            let f = FiniteField::build(q_p, q_n).unwrap();
            let chi = MultChar::canonical(Arc::clone(&f), ell, t).unwrap();
            let m = ell.pow(t);
            for a in 1..m {
                for b in 1..m {
                    if a % ell == 0 || b % ell == 0 || (a + b) % m == 0 {
                        continue;
                    }
                    let j = jacobi_sum(&chi.power(a), &chi.power(b)).unwrap();
                    let shifted = j.add(&CycInt::one(ell, t));
                    let v = shifted.pi_prime_valuation().unwrap_or(u64::MAX);
                    assert!(v >= 2, "q={q_p}, a={a}, b={b}: valuation {v}");
                }
            }
        }
    }

    #[test]
    fn hasse_davenport_jacobi_exact() {
        // J over F_{q^k} of norm-composed characters = (−1)^{k−1} J(χ^r, χ^s)^k
        use crate::field::embed;
        for (p, ell, t, k) in [(7u64, 3u64, 1u32, 2u32), (7, 3, 1, 3), (11, 5, 1, 2)] {
            let base = FiniteField::build(p, 1).unwrap();
            let sup = FiniteField::build(p, k).unwrap();
            let emb = embed(&base, &sup).unwrap();
            let chi = MultChar::canonical(Arc::clone(&base), ell, t).unwrap();
            let lifted = chi.compose_norm(&emb).unwrap();
            let j_base = jacobi_sum(&chi, &chi).unwrap();
            let j_sup = jacobi_sum(&lifted, &lifted).unwrap();
            let mut expect = j_base.pow(k as u64);
            if k % 2 == 0 {
                expect = expect.neg();
            }
            assert_eq!(j_sup, expect, "p={p}, k={k}");
        }
    }

    #[test]
    fn gauss_sum_properties() {
        let f5 = FiniteField::build(5, 1).unwrap();
        let chi = MultChar::canonical(Arc::clone(&f5), 2, 1).unwrap();
        let g = gauss_sum_complex(&chi).unwrap();
        assert!((g.norm_sqr() - 5.0).abs() < 1e-9);

        // G(χ)·G(χ̄) = χ(−1)·q
        let f7 = FiniteField::build(7, 1).unwrap();
        let chi = MultChar::canonical(Arc::clone(&f7), 3, 1).unwrap();
        let g1 = gauss_sum_complex(&chi).unwrap();
        let g2 = gauss_sum_complex(&chi.power(2)).unwrap();
        let minus_one = f7.from_int(6);
        let e = chi.eval_exp(&minus_one).unwrap();
        let angle = TAU * e as f64 / 3.0;
        let expected = 7.0 * Complex64::new(angle.cos(), angle.sin());
        assert!((g1 * g2 - expected).norm() < 1e-9);
    }

    #[test]
    fn gauss_hasse_davenport() {
        use crate::field::embed;
        let base = FiniteField::build(5, 1).unwrap();
        let sup = FiniteField::build(5, 2).unwrap();
        let emb = embed(&base, &sup).unwrap();
        let chi = MultChar::canonical(Arc::clone(&base), 2, 2).unwrap();
        let lifted = chi.compose_norm(&emb).unwrap();
        let g_base = gauss_sum_complex(&chi).unwrap();
        let g_sup = gauss_sum_complex(&lifted).unwrap();
        let lhs = -g_sup;
        let rhs = (-g_base).powu(2);
        assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn complex_embed_examples() {
        assert!((CycInt::one(3, 1).complex_embed(1) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let z = CycInt::root_power(3, 1, 1).complex_embed(1);
        let expected = Complex64::new((TAU / 3.0).cos(), (TAU / 3.0).sin());
        assert!((z - expected).norm() < 1e-12);
    }

    #[test]
    fn conductor_raise_is_ring_compatible() {
        let x = CycInt::root_power(3, 1, 1).add(&CycInt::from_int(3, 1, 2));
        let y = CycInt::root_power(3, 1, 2).scale(&BigInt::from(3));
        let prod_then_raise = x.mul(&y).to_conductor(2);
        let raise_then_prod = x.to_conductor(2).mul(&y.to_conductor(2));
        assert_eq!(prod_then_raise, raise_then_prod);
    }
}
