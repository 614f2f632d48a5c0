//! Curve parameters `(ℓ, N, δ, r, s, t)` for `y^{ℓ^N} = x^r (δ − x)^s`,
//! their validation, the per-level quotient data `(r_i, s_i, t_i)`, and CM types.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("ell = {0} is not prime")]
    NotPrime(u64),
    #[error("ell = 2 is not odd")]
    NotOdd,
    #[error("r + s + t = {found} but ell^N = {expected}")]
    SumMismatch { found: u64, expected: u64 },
    #[error("ell divides r*s*t")]
    DivisibleRST,
    #[error("delta = {0} is not ell^N-th power-free (p^(ell^N) divides it for p = {1})")]
    PowerfulDelta(u64, u64),
    #[error("ord_ell(delta) = {0} is a nonzero multiple of ell")]
    BadDeltaValuation(u32),
    #[error("ell^N = {0}^{1} overflows the supported range")]
    TooLarge(u64, u32),
}

/// Validated parameters. `r + s + t = ℓ^N`, `ℓ ∤ rst`, `δ ≥ 1` is `ℓ^N`-th
/// power-free with `ord_ℓ(δ) = 0` or `ℓ ∤ ord_ℓ(δ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveParams {
    pub ell: u64,
    pub n: u32,
    pub delta: u64,
    pub r: u64,
    pub s: u64,
    pub t: u64,
    /// Prime factorization of δ, ascending primes.
    delta_factors: Vec<(u64, u32)>,
}

/// Level-`i` exponents of the quotient curve `C_i : y^{ℓ^i} = x^{r_i}(δ−x)^{s_i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientLevelData {
    pub level: u32,
    pub r_i: u64,
    pub s_i: u64,
    pub t_i: u64,
}

/// A CM type at level `i`: half of the units mod `ℓ^i`, closed under nothing
/// but antipodally complete (`members ⊔ −members` is the full unit group).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CMType {
    pub level: u32,
    pub members: Vec<u64>,
}

/// Deterministic primality by trial division; adequate for the desk-scale
/// inputs this crate accepts (u64, with divisors probed up to √n).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Trial-division factorization, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= n) {
        if n % d == 0 {
            let mut e = 0u32;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl CurveParams {
    /// Validates `(ℓ, N, δ, r, s, t)` and precomputes the factorization of δ.
    pub fn new(ell: u64, n: u32, delta: u64, r: u64, s: u64, t: u64) -> Result<Self, ParamError> {
        if ell == 2 {
            return Err(ParamError::NotOdd);
        }
        if !is_prime(ell) {
            return Err(ParamError::NotPrime(ell));
        }
        let ell_n = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(ell))
            .ok_or(ParamError::TooLarge(ell, n))?;
        let sum = r.checked_add(s).and_then(|x| x.checked_add(t))
            .ok_or(ParamError::TooLarge(ell, n))?;
        if n == 0 || sum != ell_n {
            return Err(ParamError::SumMismatch { found: sum, expected: ell_n });
        }
        if r % ell == 0 || s % ell == 0 || t % ell == 0 {
            return Err(ParamError::DivisibleRST);
        }
        if delta == 0 {
            // 0 is divisible by p^(ell^N) for every p
            return Err(ParamError::PowerfulDelta(0, 2));
        }
        let delta_factors = factorize(delta);
        for &(p, e) in &delta_factors {
            if (e as u64) >= ell_n {
                return Err(ParamError::PowerfulDelta(delta, p));
            }
        }
        let ord_ell = delta_factors.iter().find(|&&(p, _)| p == ell).map_or(0, |&(_, e)| e);
        if ord_ell != 0 && ord_ell % (ell as u32) == 0 {
            return Err(ParamError::BadDeltaValuation(ord_ell));
        }
        Ok(CurveParams { ell, n, delta, r, s, t, delta_factors })
    }

    pub fn ell_pow_n(&self) -> u64 {
        self.ell.pow(self.n)
    }

    pub fn ell_pow(&self, i: u32) -> u64 {
        self.ell.pow(i)
    }

    /// Genus of `C_N`: `(ℓ^N − 1) / 2`.
    pub fn genus(&self) -> u64 {
        (self.ell_pow_n() - 1) / 2
    }

    pub fn delta_factorization(&self) -> &[(u64, u32)] {
        &self.delta_factors
    }

    pub fn ord_ell_delta(&self) -> u32 {
        self.delta_factors.iter().find(|&&(p, _)| p == self.ell).map_or(0, |&(_, e)| e)
    }

    /// δ with all factors of ℓ removed.
    pub fn delta_prime_to_ell(&self) -> u64 {
        self.delta / self.ell.pow(self.ord_ell_delta())
    }

    /// The per-level data `(r_i, s_i, t_i)` for `1 ≤ i ≤ N`.
    ///
    /// With `r′, s′` the positive remainders of `r, s` mod `ℓ^i`: if
    /// `r′ + s′ < ℓ^i` then `(r_i, s_i) = (r′, s′)`, if `r′ + s′ > ℓ^i` then
    /// `(r_i, s_i) = (ℓ^i − r′, ℓ^i − s′)`. Equality is impossible because
    /// `ℓ ∤ r + s`, and is asserted away.
    pub fn quotient_levels(&self) -> Vec<QuotientLevelData> {
        (1..=self.n)
            .map(|i| {
                let m = self.ell_pow(i);
                let rp = self.r % m;
                let sp = self.s % m;
                debug_assert!(rp != 0 && sp != 0);
                let (r_i, s_i) = if rp + sp < m {
                    (rp, sp)
                } else {
                    assert!(rp + sp != m, "r' + s' = ell^i cannot happen when ell does not divide r + s");
                    (m - rp, m - sp)
                };
                QuotientLevelData { level: i, r_i, s_i, t_i: m - r_i - s_i }
            })
            .collect()
    }

    /// CM type at level `i`, computed from the level data `(r_i, s_i, t_i)`:
    /// the set of `h^{-1}` over units `h` mod `ℓ^i` with
    /// `{r_i h/ℓ^i} + {s_i h/ℓ^i} + {t_i h/ℓ^i} = 1`.
    pub fn cm_type(&self, i: u32) -> CMType {
        let lev = &self.quotient_levels()[(i - 1) as usize];
        self.cm_type_from(i, lev.r_i, lev.s_i, lev.t_i)
    }

    /// Variant applying the fractional-part test to the raw `(r, s, t)`
    /// reduced mod `ℓ^i`. Coincides with [`CurveParams::cm_type`] at `i = N`.
    pub fn cm_type_raw(&self, i: u32) -> CMType {
        let m = self.ell_pow(i);
        self.cm_type_from(i, self.r % m, self.s % m, self.t % m)
    }

    fn cm_type_from(&self, i: u32, a: u64, b: u64, c: u64) -> CMType {
        let m = self.ell_pow(i);
        let mut members: Vec<u64> = (1..m)
            .filter(|h| h % self.ell != 0)
            .filter(|&h| {
                let fa = a * h % m;
                let fb = b * h % m;
                let fc = c * h % m;
                // the fractional parts sum to 1 exactly when the residues sum to m
                fa + fb + fc == m
            })
            .map(|h| inverse_mod(h, m))
            .collect();
        members.sort_unstable();
        CMType { level: i, members }
    }
}

impl CMType {
    /// `members` and `−members` partition the units mod `ℓ^i`.
    pub fn is_antipodally_complete(&self, ell: u64) -> bool {
        let m = ell.pow(self.level);
        let mut seen: Vec<u64> = self
            .members
            .iter()
            .flat_map(|&h| [h, m - h])
            .collect();
        seen.sort_unstable();
        seen.dedup();
        let units: Vec<u64> = (1..m).filter(|h| h % ell != 0).collect();
        seen == units
    }
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    // extended Euclid; m is a prime power here and gcd(a, m) = 1
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u64
}
