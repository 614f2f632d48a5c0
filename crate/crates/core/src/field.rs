//! Finite fields `F_{p^n}` with deterministic construction (lexicographically
//! smallest monic irreducible modulus, smallest primitive element), ℓ-power
//! multiplicative characters, subfield embeddings, and splitting data of a
//! prime `p ≠ ℓ` in the cyclotomic tower.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::params::{factorize, is_prime};

/// Enumeration cap for ops that walk all field elements.
pub const DEFAULT_ENUM_BUDGET: u64 = 2_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("p = {0} is not prime")]
    NotPrime(u64),
    #[error("p must differ from ell")]
    PEqualsEll,
    #[error("q = {q} exceeds the enumeration budget {budget}")]
    BudgetExceeded { q: u64, budget: u64 },
    #[error("q = p^n does not fit in the supported range")]
    TooLarge,
    #[error("character evaluated at zero")]
    ZeroInput,
    #[error("ell^t = {0} does not divide q - 1 = {1}")]
    OrderNotInField(u64, u64),
    #[error("not a subfield (need same p and sub degree dividing sup degree)")]
    NotASubfield,
    #[error("characters live on different fields")]
    FieldMismatch,
}

/// An element is a coefficient vector of length `n` (low degree first),
/// entries in `[0, p)`. Its canonical index is `Σ c_i p^i`.
pub type Elem = Vec<u64>;

#[derive(Debug)]
pub struct FiniteField {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    /// Monic irreducible modulus, length `n + 1`, leading coefficient 1.
    pub modulus: Vec<u64>,
    generator: Elem,
    budget: u64,
    log_table: OnceLock<Vec<u32>>,
}

impl FiniteField {
    pub fn build(p: u64, n: u32) -> Result<Arc<Self>, FieldError> {
        Self::build_with_budget(p, n, DEFAULT_ENUM_BUDGET)
    }

    pub fn build_with_budget(p: u64, n: u32, budget: u64) -> Result<Arc<Self>, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        assert!(n >= 1);
        let q = (0..n).try_fold(1u64, |acc, _| {
            acc.checked_mul(p).filter(|&v| v <= 1 << 40)
        })
        .ok_or(FieldError::TooLarge)?;
        let modulus = smallest_irreducible(p, n);
        let mut field = FiniteField {
            p,
            n,
            q,
            modulus,
            generator: vec![0; n as usize],
            budget,
            log_table: OnceLock::new(),
        };
        field.generator = field.find_generator();
        Ok(Arc::new(field))
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.n as usize]
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    /// The constant `v mod p`.
    pub fn from_int(&self, v: u64) -> Elem {
        let mut e = vec![0; self.n as usize];
        e[0] = v % self.p;
        e
    }

    pub fn elem_from_index(&self, mut idx: u64) -> Elem {
        debug_assert!(idx < self.q);
        let mut e = vec![0; self.n as usize];
        for c in e.iter_mut() {
            *c = idx % self.p;
            idx /= self.p;
        }
        e
    }

    pub fn index_of(&self, x: &[u64]) -> u64 {
        x.iter().rev().fold(0u64, |acc, &c| acc * self.p + c)
    }

    pub fn is_zero(&self, x: &[u64]) -> bool {
        x.iter().all(|&c| c == 0)
    }

    pub fn generator(&self) -> &Elem {
        &self.generator
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Elem {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    pub fn sub_elems(&self, a: &[u64], b: &[u64]) -> Elem {
        a.iter().zip(b).map(|(&x, &y)| (x + self.p - y) % self.p).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Elem {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Elem {
        let n = self.n as usize;
        if n == 1 {
            return vec![mulmod(a[0], b[0], self.p)];
        }
        let mut conv = vec![0u128; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                conv[i + j] += (x as u128) * (y as u128);
            }
        }
        let p128 = self.p as u128;
        // reduce by the monic modulus, high degree down
        for i in (n..2 * n - 1).rev() {
            let c = conv[i] % p128;
            if c == 0 {
                continue;
            }
            let shift = i - n;
            for (k, &m) in self.modulus.iter().take(n).enumerate() {
                if m != 0 {
                    // subtract c * m * x^(shift + k)
                    conv[shift + k] += (self.p as u128 - (c * m as u128) % p128) % p128 * 1;
                }
            }
            conv[i] = 0;
        }
        conv[..n].iter().map(|&c| (c % p128) as u64).collect()
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Elem {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn inv(&self, a: &[u64]) -> Elem {
        debug_assert!(!self.is_zero(a));
        self.pow(a, self.q - 2)
    }

    /// Absolute trace to `F_p`, as an integer in `[0, p)`.
    pub fn trace_to_prime(&self, a: &[u64]) -> u64 {
        let mut acc = a.to_vec();
        let mut frob = a.to_vec();
        for _ in 1..self.n {
            frob = self.pow(&frob, self.p);
            acc = self.add(&acc, &frob);
        }
        debug_assert!(acc[1..].iter().all(|&c| c == 0), "trace must be a prime-field constant");
        acc[0]
    }

    /// Relative norm onto the subfield of degree `sub_deg`: `∏ x^(p^(sub_deg·i))`.
    /// The result lies in the embedded copy of that subfield.
    pub fn norm_rel(&self, a: &[u64], sub_deg: u32) -> Elem {
        assert!(self.n % sub_deg == 0);
        let k = self.n / sub_deg;
        let q_sub = self.p.pow(sub_deg);
        let mut acc = a.to_vec();
        let mut y = a.to_vec();
        for _ in 1..k {
            y = self.pow(&y, q_sub);
            acc = self.mul(&acc, &y);
        }
        acc
    }

    fn find_generator(&self) -> Elem {
        let factors = factorize(self.q - 1);
        'outer: for idx in 1..self.q {
            let cand = self.elem_from_index(idx);
            for &(r, _) in &factors {
                if self.pow(&cand, (self.q - 1) / r) == self.one() {
                    continue 'outer;
                }
            }
            return cand;
        }
        unreachable!("F_q^x is cyclic, a generator exists");
    }

    pub fn check_budget(&self) -> Result<(), FieldError> {
        if self.q > self.budget {
            return Err(FieldError::BudgetExceeded { q: self.q, budget: self.budget });
        }
        Ok(())
    }

    /// Full discrete-log table w.r.t. the canonical generator:
    /// `table[index_of(x)] = log_g(x)` for `x ≠ 0`, `u32::MAX` at index 0.
    pub fn log_table(&self) -> Result<&[u32], FieldError> {
        self.check_budget()?;
        Ok(self.log_table.get_or_init(|| {
            let mut table = vec![u32::MAX; self.q as usize];
            let mut x = self.one();
            for k in 0..self.q - 1 {
                table[self.index_of(&x) as usize] = k as u32;
                x = self.mul(&x, &self.generator);
            }
            debug_assert_eq!(x, self.one());
            table
        }))
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Monic irreducible of degree `n` over `F_p` whose non-leading coefficient
/// vector has the smallest canonical index. Degree 1 yields `x`.
fn smallest_irreducible(p: u64, n: u32) -> Vec<u64> {
    let mut tail_idx = 0u64;
    loop {
        let mut f: Vec<u64> = Vec::with_capacity(n as usize + 1);
        let mut idx = tail_idx;
        for _ in 0..n {
            f.push(idx % p);
            idx /= p;
        }
        f.push(1);
        if is_irreducible(p, &f) {
            return f;
        }
        tail_idx += 1;
        assert!(tail_idx < p.pow(n), "no irreducible of degree {n} found");
    }
}

fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let n = (f.len() - 1) as u32;
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    // x^(p^n) == x mod f, and gcd(x^(p^(n/r)) - x, f) == 1 for prime r | n
    let mut frob = x.clone(); // x^(p^k) mod f after k steps
    let mut powers = vec![x.clone()];
    for _ in 0..n {
        frob = poly_powmod(p, &frob, p, f);
        powers.push(frob.clone());
    }
    if poly_trim(&poly_sub(p, &powers[n as usize], &x)).is_empty() == false {
        return false;
    }
    for (r, _) in factorize(n as u64) {
        let k = (n as u64 / r) as usize;
        let diff = poly_trim(&poly_sub(p, &powers[k], &x));
        if diff.is_empty() {
            return false;
        }
        let g = poly_gcd(p, f, &diff);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn poly_trim(f: &[u64]) -> Vec<u64> {
    let mut v = f.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_sub(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect()
}

fn poly_mulmod(p: u64, a: &[u64], b: &[u64], f: &[u64]) -> Vec<u64> {
    let mut conv = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            conv[i + j] += x as u128 * y as u128;
        }
    }
    let mut conv: Vec<u64> = conv.into_iter().map(|c| (c % p as u128) as u64).collect();
    let deg_f = f.len() - 1;
    while conv.len() > deg_f {
        let c = *conv.last().unwrap();
        let top = conv.len() - 1;
        if c != 0 {
            let shift = top - deg_f;
            for (k, &m) in f.iter().take(deg_f).enumerate() {
                if m != 0 {
                    let sub = mulmod(c, m, p);
                    conv[shift + k] = (conv[shift + k] + p - sub) % p;
                }
            }
        }
        conv.pop();
    }
    conv.resize(deg_f, 0);
    conv
}

fn poly_powmod(p: u64, a: &[u64], mut e: u64, f: &[u64]) -> Vec<u64> {
    let deg_f = f.len() - 1;
    let mut base = a.to_vec();
    base.resize(deg_f.max(base.len()), 0);
    let mut acc = vec![0u64; deg_f];
    acc[0] = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(p, &acc, &base, f);
        }
        e >>= 1;
        if e > 0 {
            base = poly_mulmod(p, &base, &base, f);
        }
    }
    acc
}

fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = poly_trim(a);
    let mut b = poly_trim(b);
    while !b.is_empty() {
        let r = poly_rem(p, &a, &b);
        a = b;
        b = poly_trim(&r);
    }
    // normalize monic
    if let Some(&lc) = a.last() {
        let inv = modinv(lc, p);
        for c in a.iter_mut() {
            *c = mulmod(*c, inv, p);
        }
    }
    a
}

fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lc_inv = modinv(b[db], p);
    while r.len() > db {
        let c = *r.last().unwrap();
        if c != 0 {
            let coef = mulmod(c, lc_inv, p);
            let shift = r.len() - 1 - db;
            for (k, &m) in b.iter().take(db).enumerate() {
                let sub = mulmod(coef, m, p);
                r[shift + k] = (r[shift + k] + p - sub) % p;
            }
        }
        r.pop();
    }
    r
}

fn modinv(a: u64, p: u64) -> u64 {
    // p prime
    let mut exp = p - 2;
    let mut base = a % p;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        exp >>= 1;
        base = mulmod(base, base, p);
    }
    acc
}

/// Splitting behavior of `p ≠ ℓ` along the ℓ-power tower:
/// `f` is the order of `p` mod ℓ, `e_p = ord_ℓ(p^f − 1)`, and the order of
/// `p` mod `ℓ^t` is `ℓ^{N_t} f` with `N_t = max(0, t − e_p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingData {
    pub p: u64,
    pub ell: u64,
    pub f: u32,
    pub e_p: u32,
    /// `N_t` for `t = 1..=n`, index `t - 1`.
    pub n_t: Vec<u32>,
}

pub fn splitting_data(p: u64, ell: u64, n: u32) -> Result<SplittingData, FieldError> {
    if p == ell {
        return Err(FieldError::PEqualsEll);
    }
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    let mut f = 1u32;
    let mut pow = p % ell;
    while pow != 1 {
        pow = pow * p % ell;
        f += 1;
    }
    let pb = BigUint::from(p);
    let mut e_p = 0u32;
    loop {
        let modulus = BigUint::from(ell).pow(e_p + 1);
        if pb.modpow(&BigUint::from(f), &modulus).is_one() {
            e_p += 1;
        } else {
            break;
        }
    }
    let n_t = (1..=n).map(|t| t.saturating_sub(e_p)).collect();
    Ok(SplittingData { p, ell, f, e_p, n_t })
}

impl SplittingData {
    /// `ord(p mod ℓ^t) = ℓ^{N_t} · f`.
    pub fn order_mod_ell_pow(&self, t: u32) -> u64 {
        self.ell.pow(self.n_t[(t - 1) as usize]) * self.f as u64
    }
}

/// A multiplicative character of order dividing `ℓ^t` on `F_q^×`, pinned to
/// the canonical generator `g` by `χ(g) = ζ_{ℓ^t}^a`.
#[derive(Debug, Clone)]
pub struct MultChar {
    pub field: Arc<FiniteField>,
    pub ell: u64,
    pub t: u32,
    /// `χ(g) = ζ_{ℓ^t}^log_image`
    pub log_image: u64,
}

impl MultChar {
    /// The canonical character of exact order `ℓ^t` (`log_image = 1`).
    pub fn canonical(field: Arc<FiniteField>, ell: u64, t: u32) -> Result<Self, FieldError> {
        let m = ell.pow(t);
        if (field.q - 1) % m != 0 {
            return Err(FieldError::OrderNotInField(m, field.q - 1));
        }
        Ok(MultChar { field, ell, t, log_image: 1 })
    }

    pub fn modulus(&self) -> u64 {
        self.ell.pow(self.t)
    }

    pub fn is_trivial(&self) -> bool {
        self.log_image % self.modulus() == 0
    }

    /// `χ^k`, kept at the same modulus `ℓ^t`.
    pub fn power(&self, k: u64) -> Self {
        let m = self.modulus();
        MultChar {
            field: Arc::clone(&self.field),
            ell: self.ell,
            t: self.t,
            log_image: mulmod(self.log_image % m, k % m, m),
        }
    }

    /// Exponent `e` with `χ(x) = ζ_{ℓ^t}^e`, via Pohlig–Hellman inside the
    /// ℓ-subgroup: the discrete log of `x^{(q−1)/ℓ^t}` base `g^{(q−1)/ℓ^t}`.
    pub fn eval_exp(&self, x: &[u64]) -> Result<u64, FieldError> {
        let fld = &self.field;
        if fld.is_zero(x) {
            return Err(FieldError::ZeroInput);
        }
        let m = self.modulus();
        let q1 = fld.q - 1;
        let h = fld.pow(fld.generator(), q1 / m);
        let base = fld.pow(&h, m / self.ell); // order ℓ
        let mut base_pows = Vec::with_capacity(self.ell as usize);
        let mut bp = fld.one();
        for _ in 0..self.ell {
            base_pows.push(bp.clone());
            bp = fld.mul(&bp, &base);
        }
        let h_inv = fld.pow(&h, m - 1);
        let mut e = 0u64;
        let mut cur = fld.pow(x, q1 / m);
        for i in 0..self.t {
            let z = fld.pow(&cur, m / self.ell.pow(i + 1));
            let d = base_pows
                .iter()
                .position(|bpw| *bpw == z)
                .expect("element must lie in the ell-subgroup") as u64;
            if d != 0 {
                e += d * self.ell.pow(i);
                cur = fld.mul(&cur, &fld.pow(&h_inv, d * self.ell.pow(i)));
            }
        }
        Ok(mulmod(self.log_image % m, e, m))
    }

    /// The composite `χ ∘ N_{sup/sub}` as a character on `sup`, expressed in
    /// terms of `sup`'s canonical generator.
    pub fn compose_norm(&self, emb: &Embedding) -> Result<Self, FieldError> {
        if !Arc::ptr_eq(&self.field, &emb.sub) {
            return Err(FieldError::FieldMismatch);
        }
        let sup = &emb.sup;
        let norm_g = sup.norm_rel(sup.generator(), emb.sub.n);
        let in_sub = emb
            .preimage(&norm_g)
            .expect("relative norm of a generator lands in the subfield");
        let e = self.eval_exp(&in_sub)?;
        Ok(MultChar { field: Arc::clone(sup), ell: self.ell, t: self.t, log_image: e })
    }
}

/// Ring embedding `sub ↪ sup`, determined by the smallest root of `sub`'s
/// modulus in `sup` (canonical element order).
pub struct Embedding {
    pub sub: Arc<FiniteField>,
    pub sup: Arc<FiniteField>,
    pub root: Elem,
    preimages: HashMap<u64, u64>,
}

pub fn embed(sub: &Arc<FiniteField>, sup: &Arc<FiniteField>) -> Result<Embedding, FieldError> {
    if sub.p != sup.p || sup.n % sub.n != 0 {
        return Err(FieldError::NotASubfield);
    }
    sup.check_budget()?;
    let root = (0..sup.q)
        .map(|idx| sup.elem_from_index(idx))
        .find(|cand| {
            // Horner evaluation of sub.modulus at cand
            let mut acc = sup.zero();
            for &c in sub.modulus.iter().rev() {
                acc = sup.mul(&acc, cand);
                acc[0] = (acc[0] + c) % sup.p;
            }
            sup.is_zero(&acc)
        })
        .expect("sub modulus splits in sup");
    let mut emb = Embedding {
        sub: Arc::clone(sub),
        sup: Arc::clone(sup),
        root,
        preimages: HashMap::new(),
    };
    let mut map = HashMap::with_capacity(sub.q as usize);
    for idx in 0..sub.q {
        let img = emb.map(&sub.elem_from_index(idx));
        map.insert(emb.sup.index_of(&img), idx);
    }
    emb.preimages = map;
    Ok(emb)
}

impl Embedding {
    pub fn map(&self, x: &[u64]) -> Elem {
        let mut acc = self.sup.zero();
        for &c in x.iter().rev() {
            acc = self.sup.mul(&acc, &self.root);
            acc[0] = (acc[0] + c) % self.sup.p;
        }
        acc
    }

    pub fn preimage(&self, y: &[u64]) -> Option<Elem> {
        self.preimages
            .get(&self.sup.index_of(y))
            .map(|&idx| self.sub.elem_from_index(idx))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_examples() {
        let sd = splitting_data(3, 11, 1).unwrap();
        assert_eq!((sd.f, sd.e_p), (5, 2));

        let sd = splitting_data(2, 3, 1).unwrap();
        assert_eq!((sd.f, sd.e_p), (2, 1));

        let sd = splitting_data(7, 3, 2).unwrap();
        assert_eq!((sd.f, sd.e_p), (1, 1));
        assert_eq!(sd.n_t, vec![0, 1]);
        assert_eq!(sd.order_mod_ell_pow(2), 3);

        assert_eq!(splitting_data(3, 3, 1).unwrap_err(), FieldError::PEqualsEll);
    }

    #[test]
    fn splitting_consistency_small() {
        for (p, ell) in [(2u64, 3u64), (7, 3), (11, 5), (3, 11), (19, 3)] {
            let sd = splitting_data(p, ell, 3).unwrap();
            for t in 1..=3u32 {
                let m = BigUint::from(ell).pow(t);
                let ord = sd.order_mod_ell_pow(t);
                assert!(BigUint::from(p).modpow(&BigUint::from(ord), &m).is_one());
                // no proper divisor of the form ell^j * f' works
                for d in 1..ord {
                    if ord % d == 0 && d < ord {
                        assert!(
                            !BigUint::from(p).modpow(&BigUint::from(d), &m).is_one(),
                            "order must be minimal"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn build_field_examples() {
        let f7 = FiniteField::build(7, 1).unwrap();
        assert_eq!(f7.modulus, vec![0, 1]);
        assert_eq!(f7.index_of(f7.generator()), 3);

        let f4 = FiniteField::build(2, 2).unwrap();
        assert_eq!(f4.modulus, vec![1, 1, 1]);

        let f25 = FiniteField::build(5, 2).unwrap();
        let g = f25.generator().clone();
        assert_eq!(f25.pow(&g, 24), f25.one());
        for d in [2u64, 3, 4, 6, 8, 12] {
            assert_ne!(f25.pow(&g, 24 / d), f25.one());
        }
    }

    #[test]
    fn char_eval_examples() {
        let f7 = FiniteField::build(7, 1).unwrap();
        let chi = MultChar::canonical(Arc::clone(&f7), 3, 1).unwrap();
        assert_eq!(chi.eval_exp(&f7.one()).unwrap(), 0);
        assert_eq!(chi.eval_exp(f7.generator()).unwrap(), 1);
        assert_eq!(chi.eval_exp(&f7.zero()).unwrap_err(), FieldError::ZeroInput);
    }

    #[test]
    fn char_multiplicativity() {
        let f = FiniteField::build(19, 1).unwrap();
        let chi = MultChar::canonical(Arc::clone(&f), 3, 2).unwrap();
        let m = chi.modulus();
        for xi in 1..19u64 {
            for yi in 1..19u64 {
                let x = f.elem_from_index(xi);
                let y = f.elem_from_index(yi);
                let xy = f.mul(&x, &y);
                assert_eq!(
                    (chi.eval_exp(&x).unwrap() + chi.eval_exp(&y).unwrap()) % m,
                    chi.eval_exp(&xy).unwrap()
                );
            }
        }
    }

    #[test]
    fn char_exact_order() {
        // chi of order ell^t composed with norm keeps order ell^t
        let f5 = FiniteField::build(5, 1).unwrap();
        let f25 = FiniteField::build(5, 2).unwrap();
        let emb = embed(&f5, &f25).unwrap();
        let chi = MultChar::canonical(Arc::clone(&f5), 2, 2).unwrap();
        let lifted = chi.compose_norm(&emb).unwrap();
        // multiplicative order of lifted equals 4: log_image must stay a unit mod 4
        assert_eq!(lifted.log_image % 2, 1);
        // multiplicativity spot check
        let m = lifted.modulus();
        for xi in [1u64, 2, 7, 11, 24] {
            for yi in [1u64, 3, 9, 13] {
                let x = f25.elem_from_index(xi);
                let y = f25.elem_from_index(yi);
                if f25.is_zero(&x) || f25.is_zero(&y) {
                    continue;
                }
                let xy = f25.mul(&x, &y);
                assert_eq!(
                    (lifted.eval_exp(&x).unwrap() + lifted.eval_exp(&y).unwrap()) % m,
                    lifted.eval_exp(&xy).unwrap()
                );
            }
        }
    }

    #[test]
    fn embed_examples() {
        let f4 = FiniteField::build(2, 2).unwrap();
        let f16 = FiniteField::build(2, 4).unwrap();
        let emb = embed(&f4, &f16).unwrap();
        // x in F_4 has multiplicative order 3
        let x = f4.elem_from_index(2);
        let img = emb.map(&x);
        assert_eq!(f16.pow(&img, 3), f16.one());
        assert_ne!(img, f16.one());

        // identity embedding
        let f7 = FiniteField::build(7, 1).unwrap();
        let emb_id = embed(&f7, &f7).unwrap();
        for idx in 0..7 {
            let e = f7.elem_from_index(idx);
            assert_eq!(emb_id.map(&e), e);
        }

        // norm compatibility: N(embed(x)) = embed(x^((q^k-1)/(q-1)))
        let f9 = FiniteField::build(3, 2).unwrap();
        let f81 = FiniteField::build(3, 4).unwrap();
        let emb2 = embed(&f9, &f81).unwrap();
        for idx in 1..9u64 {
            let x = f9.elem_from_index(idx);
            let lhs = f81.norm_rel(&emb2.map(&x), 2);
            let rhs = emb2.map(&f9.pow(&x, (81 - 1) / (9 - 1)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn log_table_consistent_with_char_eval() {
        let f = FiniteField::build(2, 4).unwrap();
        let table = f.log_table().unwrap().to_vec();
        let chi = MultChar::canonical(Arc::clone(&f), 5, 1).unwrap();
        for idx in 1..16u64 {
            let x = f.elem_from_index(idx);
            let log = table[idx as usize] as u64;
            assert_eq!(chi.eval_exp(&x).unwrap(), log % 5);
        }
    }
}
