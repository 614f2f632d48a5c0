//! L-polynomials of `C_N` at good primes: the Jacobi-sum product formula,
//! an exact zeta-series oracle (exp of the count series), and Weil-bound /
//! functional-equation sanity checks on the complex roots.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::count::{count_bruteforce, CountError};
use crate::cyclotomic::{jacobi_sum, CycError, CycInt};
use crate::field::{splitting_data, FieldError, FiniteField, MultChar};
use crate::params::CurveParams;

#[derive(Debug, Error)]
pub enum LPolyError {
    #[error("bad reduction: p = {0} divides ell*delta")]
    BadReduction(u64),
    #[error("product formula produced non-integer coefficients")]
    NonIntegerCoefficients,
    #[error("Weil check failed: {0}")]
    WeilViolation(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Cyc(#[from] CycError),
    #[error(transparent)]
    Count(#[from] CountError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolynomial {
    pub p: u64,
    pub params: CurveParams,
    /// Coefficients of `L(T)`, constant term first; `coeffs[0] = 1`,
    /// degree `ℓ^N − 1`.
    pub coeffs: Vec<BigInt>,
}

pub fn l_polynomial(params: &CurveParams, p: u64) -> Result<LPolynomial, LPolyError> {
    l_polynomial_relabeled(params, p, 1, crate::field::DEFAULT_ENUM_BUDGET)
}

/// Same product with every character replaced by its `u`-th power
/// (`gcd(u, ℓ) = 1`); the result is independent of `u`, which the tests
/// exercise as relabeling invariance.
pub fn l_polynomial_relabeled(
    params: &CurveParams,
    p: u64,
    relabel: u64,
    budget: u64,
) -> Result<LPolynomial, LPolyError> {
    if p == params.ell || params.delta % p == 0 {
        return Err(LPolyError::BadReduction(p));
    }
    let ell = params.ell;
    let big_n = params.n;
    let sd = splitting_data(p, ell, big_n)?;

    // product over levels j of per-orbit factors (1 + A T^{d_j}),
    // assembled in Z[ζ_{ℓ^N}][T]
    let mut poly: Vec<CycInt> = vec![CycInt::one(ell, big_n)];
    for j in 1..=big_n {
        let d_j = sd.order_mod_ell_pow(j);
        let field = FiniteField::build_with_budget(p, d_j as u32, budget)?;
        field.check_budget()?;
        assert_eq!((field.q - 1) % ell.pow(j), 0, "ℓ^j must divide q − 1 at level j");
        let chi = MultChar::canonical(Arc::clone(&field), ell, j)?.power(relabel);
        let m = ell.pow(j);

        let mut seen = vec![false; m as usize];
        let mut factors: Vec<CycInt> = Vec::new();
        for i in 1..m {
            if i % ell == 0 || seen[i as usize] {
                continue;
            }
            // orbit of i under multiplication by p
            let mut orbit_len = 0u64;
            let mut cur = i;
            loop {
                seen[cur as usize] = true;
                orbit_len += 1;
                cur = (cur as u128 * p as u128 % m as u128) as u64;
                if cur == i {
                    break;
                }
            }
            assert_eq!(orbit_len, d_j, "orbit size must equal ord(p mod ℓ^j)");

            let chi_r = chi.power(params.r % m).power(i);
            let chi_s = chi.power(params.s % m).power(i);
            let j_sum = jacobi_sum(&chi_r, &chi_s)?;
            let delta_elem = field.from_int(params.delta % p);
            let e_delta = chi.eval_exp(&delta_elem)?;
            let twist_exp = (e_delta as u128 * (i as u128 * ((params.r + params.s) % m) as u128 % m as u128))
                % m as u128;
            let a = j_sum.mul(&CycInt::root_power(ell, j, twist_exp as u64));
            debug_assert_eq!(
                a.galois_conjugate(p % m).unwrap(),
                a,
                "orbit factor must be Frobenius-invariant"
            );
            factors.push(a.to_conductor(big_n));
        }

        for a in factors {
            // multiply poly by (1 + a T^{d_j})
            let mut next = vec![CycInt::zero(ell, big_n); poly.len() + d_j as usize];
            for (k, c) in poly.iter().enumerate() {
                next[k] = next[k].add(c);
                next[k + d_j as usize] = next[k + d_j as usize].add(&c.mul(&a));
            }
            poly = next;
        }
    }

    let expected_deg = (params.ell_pow_n() - 1) as usize;
    while poly.len() > expected_deg + 1 && poly.last().map_or(false, |c| c.is_zero()) {
        poly.pop();
    }
    if poly.len() != expected_deg + 1 {
        return Err(LPolyError::NonIntegerCoefficients);
    }
    let coeffs: Option<Vec<BigInt>> = poly.iter().map(|c| c.as_integer()).collect();
    let coeffs = coeffs.ok_or(LPolyError::NonIntegerCoefficients)?;
    if coeffs[0] != BigInt::one() {
        return Err(LPolyError::NonIntegerCoefficients);
    }
    Ok(LPolynomial { p, params: params.clone(), coeffs })
}

/// Exact truncation of `exp(Σ_k (#C(F_{p^k}) − p^k − 1) T^k / k)` to the
/// requested degree, with counts from the brute-force enumerator.
pub fn l_polynomial_series_oracle(
    params: &CurveParams,
    p: u64,
    degree: u32,
    budget: u64,
) -> Result<Vec<BigRational>, LPolyError> {
    let mut a = vec![BigRational::zero()]; // a[k] = count − q^k − 1, 1-based
    for k in 1..=degree {
        let field = FiniteField::build_with_budget(p, k, budget)?;
        let count = count_bruteforce(params, &field)?;
        let qk = BigInt::from(p).pow(k);
        a.push(BigRational::from(BigInt::from(count) - qk - BigInt::one()));
    }
    let mut l = vec![BigRational::one()];
    for n in 1..=degree as usize {
        let mut acc = BigRational::zero();
        for k in 1..=n {
            acc += &a[k] * &l[n - k];
        }
        l.push(acc / BigRational::from(BigInt::from(n)));
    }
    Ok(l)
}

#[derive(Debug, Clone, Serialize)]
pub struct WeilReport {
    /// `| |u_i| − 1 |` for the reciprocal roots scaled by `1/√p`.
    pub modulus_deviation: f64,
    /// Hausdorff-style distance between the scaled root multiset and its
    /// image under `u ↦ 1/u`.
    pub pairing_deviation: f64,
}

const WEIL_TOL: f64 = 1e-6;

/// Checks that all complex reciprocal roots have modulus `√p` (within 1e−6
/// relative) and that the root multiset is stable under `α ↦ p/α`.
pub fn weil_check(lp: &LPolynomial) -> Result<WeilReport, LPolyError> {
    let deg = lp.coeffs.len() - 1;
    if deg == 0 {
        return Ok(WeilReport { modulus_deviation: 0.0, pairing_deviation: 0.0 });
    }
    // scale: reciprocal roots γ satisfy Σ a_k γ^{-k}... work with
    // M(u) = Σ a_k p^{-k/2} u^k whose roots have |u| = 1 when Weil holds
    let sqrt_p = (lp.p as f64).sqrt();
    let scaled: Vec<f64> = lp
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| big_to_f64(c) / sqrt_p.powi(k as i32))
        .collect();
    let roots = durand_kerner(&scaled);
    let modulus_deviation = roots
        .iter()
        .map(|u| (u.norm() - 1.0).abs())
        .fold(0.0f64, f64::max);
    if modulus_deviation > WEIL_TOL {
        return Err(LPolyError::WeilViolation(format!(
            "root modulus off unit circle by {modulus_deviation:.3e}"
        )));
    }
    // multiset stability under u -> 1/u
    let pairing_deviation = roots
        .iter()
        .map(|u| {
            let inv = 1.0 / u;
            roots.iter().map(|v| (v - inv).norm()).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0f64, f64::max);
    if pairing_deviation > WEIL_TOL {
        return Err(LPolyError::WeilViolation(format!(
            "root multiset not stable under u ↦ 1/u (deviation {pairing_deviation:.3e})"
        )));
    }
    Ok(WeilReport { modulus_deviation, pairing_deviation })
}

fn big_to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or_else(|| if c.is_negative() { f64::MIN } else { f64::MAX })
}

/// Durand–Kerner iteration on a dense real-coefficient polynomial
/// (constant first). Adequate for the well-separated unit-circle root sets
/// that arise here.
fn durand_kerner(coeffs: &[f64]) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c / lead, 0.0)).collect();
    let eval = |x: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..1000 {
        let mut max_delta = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            max_delta = max_delta.max(delta.norm());
        }
        if max_delta < 1e-13 {
            break;
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(ell: u64, n: u32, delta: u64, r: u64, s: u64) -> CurveParams {
        let t = ell.pow(n) - r - s;
        CurveParams::new(ell, n, delta, r, s, t).unwrap()
    }

    #[test]
    fn quadratic_matches_series_oracle() {
        let pr = params(3, 1, 1, 1, 1);
        let lp = l_polynomial(&pr, 7).unwrap();
        assert_eq!(lp.coeffs.len(), 3);
        assert_eq!(lp.coeffs[0], BigInt::one());
        assert_eq!(lp.coeffs[2], BigInt::from(7));
        let oracle = l_polynomial_series_oracle(&pr, 7, 2, 1 << 20).unwrap();
        for (k, c) in lp.coeffs.iter().enumerate() {
            assert_eq!(BigRational::from(c.clone()), oracle[k]);
        }
    }

    #[test]
    fn degree_at_level_two() {
        let pr = params(3, 2, 5, 1, 1);
        let lp = l_polynomial(&pr, 7).unwrap();
        assert_eq!(lp.coeffs.len() - 1, 8);
        weil_check(&lp).unwrap();
    }

    #[test]
    fn relabeling_and_swap_invariance() {
        let pr = params(3, 1, 2, 1, 1);
        let base = l_polynomial(&pr, 7).unwrap();
        let re = l_polynomial_relabeled(&pr, 7, 2, crate::field::DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(base.coeffs, re.coeffs);

        let pr_swap = params(3, 2, 5, 4, 1);
        let pr_orig = params(3, 2, 5, 1, 4);
        assert_eq!(
            l_polynomial(&pr_orig, 7).unwrap().coeffs,
            l_polynomial(&pr_swap, 7).unwrap().coeffs
        );
    }

    #[test]
    fn weil_negative_control() {
        let pr = params(3, 1, 1, 1, 1);
        let mut lp = l_polynomial(&pr, 7).unwrap();
        lp.coeffs[1] += BigInt::from(40);
        assert!(matches!(weil_check(&lp), Err(LPolyError::WeilViolation(_))));
    }

    #[test]
    fn weil_vacuous_for_constant() {
        let pr = params(3, 1, 1, 1, 1);
        let lp = LPolynomial { p: 7, params: pr, coeffs: vec![BigInt::one()] };
        let rep = weil_check(&lp).unwrap();
        assert_eq!(rep.modulus_deviation, 0.0);
    }

    #[test]
    fn series_oracle_degree_zero_term() {
        let pr = params(5, 1, 2, 1, 2);
        let oracle = l_polynomial_series_oracle(&pr, 11, 0, 1 << 20).unwrap();
        assert_eq!(oracle, vec![BigRational::one()]);
    }
}
