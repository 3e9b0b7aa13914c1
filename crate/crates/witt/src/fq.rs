//! Arithmetic in F_p and its extension F_{p^d} = F_p[t]/(f).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq)]
struct FieldData {
    p: BigUint,
    d: usize,
    /// Monic defining polynomial, length d+1, constant term first.
    f: Vec<BigUint>,
}

/// The field F_{p^d} = F_p[t]/(f), with f monic irreducible of degree d.
#[derive(Debug, Clone)]
pub struct FqField(Arc<FieldData>);

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for FqField {}

/// An element of F_{p^d}, stored as d canonical coefficients of 1, t, ..., t^{d-1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqElement {
    coeffs: Vec<BigUint>,
}

impl FqElement {
    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }
}

impl FqField {
    /// Creates F_{p^d} with the lexicographically smallest monic irreducible
    /// defining polynomial of degree d over F_p.
    pub fn new(p: BigUint, d: usize) -> Result<Self> {
        let f = find_irreducible(&p, d)?;
        Ok(FqField(Arc::new(FieldData { p, d, f })))
    }

    /// Creates F_{p^d} with an explicit defining polynomial, which must be
    /// monic of degree d and irreducible over F_p.
    pub fn with_modulus(p: BigUint, f: Vec<BigUint>) -> Result<Self> {
        if !is_prime(&p) {
            return Err(Error::InvalidParameter(format!("{} is not prime", p)));
        }
        let d = f.len().checked_sub(1).unwrap_or(0);
        if d == 0 {
            return Err(Error::InvalidParameter(
                "defining polynomial must have degree >= 1".into(),
            ));
        }
        let f: Vec<BigUint> = f.iter().map(|c| c % &p).collect();
        if !f[d].is_one() {
            return Err(Error::InvalidParameter(
                "defining polynomial must be monic".into(),
            ));
        }
        if !is_irreducible(&p, &f) {
            return Err(Error::InvalidParameter(
                "defining polynomial is not irreducible".into(),
            ));
        }
        Ok(FqField(Arc::new(FieldData { p, d, f })))
    }

    pub fn p(&self) -> &BigUint {
        &self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.d
    }

    /// The field cardinality q = p^d.
    pub fn q(&self) -> BigUint {
        self.0.p.pow(self.0.d as u32)
    }

    /// The defining polynomial, constant term first, length d+1.
    pub fn modulus(&self) -> &[BigUint] {
        &self.0.f
    }

    pub fn zero(&self) -> FqElement {
        FqElement {
            coeffs: vec![BigUint::zero(); self.0.d],
        }
    }

    pub fn one(&self) -> FqElement {
        self.from_natural(BigUint::one())
    }

    /// The generator t of the extension (equals the residue of p in F_p when d = 1,
    /// i.e. zero, so only meaningful for d >= 2; for d = 1 this is the root of f).
    pub fn generator(&self) -> FqElement {
        if self.0.d == 1 {
            // t is the root of the degree-1 modulus t + c, i.e. -c.
            let c = &self.0.f[0];
            let v = if c.is_zero() {
                BigUint::zero()
            } else {
                &self.0.p - c
            };
            FqElement { coeffs: vec![v] }
        } else {
            let mut coeffs = vec![BigUint::zero(); self.0.d];
            coeffs[1] = BigUint::one();
            FqElement { coeffs }
        }
    }

    /// Builds an element from arbitrary coefficients of 1, t, ..., reducing
    /// mod p and mod f as needed.
    pub fn from_coeffs(&self, coeffs: &[BigUint]) -> FqElement {
        let reduced: Vec<BigUint> = coeffs.iter().map(|c| c % &self.0.p).collect();
        let rem = poly_rem(&self.0.p, &reduced, &self.0.f);
        let mut out = vec![BigUint::zero(); self.0.d];
        for (i, c) in rem.into_iter().enumerate() {
            out[i] = c;
        }
        FqElement { coeffs: out }
    }

    pub fn from_natural(&self, v: BigUint) -> FqElement {
        let mut coeffs = vec![BigUint::zero(); self.0.d];
        coeffs[0] = v % &self.0.p;
        FqElement { coeffs }
    }

    pub fn is_zero(&self, x: &FqElement) -> bool {
        x.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, a: &FqElement, b: &FqElement) -> FqElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| {
                let s = x + y;
                if s >= self.0.p {
                    s - &self.0.p
                } else {
                    s
                }
            })
            .collect();
        FqElement { coeffs }
    }

    pub fn sub(&self, a: &FqElement, b: &FqElement) -> FqElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| if x >= y { x - y } else { x + &self.0.p - y })
            .collect();
        FqElement { coeffs }
    }

    pub fn neg(&self, a: &FqElement) -> FqElement {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &FqElement, b: &FqElement) -> FqElement {
        let d = self.0.d;
        if d == 1 {
            return FqElement {
                coeffs: vec![&a.coeffs[0] * &b.coeffs[0] % &self.0.p],
            };
        }
        let mut prod = vec![BigUint::zero(); 2 * d - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[i + j] = &prod[i + j] + x * y;
            }
        }
        for c in prod.iter_mut() {
            *c = &*c % &self.0.p;
        }
        let rem = poly_rem(&self.0.p, &prod, &self.0.f);
        let mut out = vec![BigUint::zero(); d];
        for (i, c) in rem.into_iter().enumerate() {
            out[i] = c;
        }
        FqElement { coeffs: out }
    }

    pub fn pow(&self, a: &FqElement, e: &BigUint) -> FqElement {
        let mut result = self.one();
        let mut base = a.clone();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = self.mul(&result, &base);
            }
            if i + 1 < bits {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    pub fn inv(&self, a: &FqElement) -> Result<FqElement> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        // F_q^* has order q - 1.
        let e = self.q() - BigUint::one() - BigUint::one();
        Ok(self.pow(a, &e))
    }

    /// x^(p^r), the r-fold Frobenius.
    pub fn frobenius(&self, x: &FqElement, r: u32) -> FqElement {
        let r = (r as usize % self.0.d) as u32;
        if r == 0 {
            return x.clone();
        }
        self.pow(x, &self.0.p.pow(r))
    }

    /// The unique y with y^(p^r) = x. F_q is perfect so this always exists;
    /// since Frobenius has order d, it is x^(p^((d - r mod d) mod d)).
    pub fn pth_root(&self, x: &FqElement, r: u32) -> FqElement {
        let d = self.0.d as u32;
        self.frobenius(x, (d - r % d) % d)
    }

    /// Compact text form in the generator t, e.g. `2*t^3+t+1`, no spaces.
    pub fn element_string(&self, x: &FqElement) -> String {
        coeffs_to_string(&x.coeffs)
    }
}

/// Renders a constant-first coefficient vector as a compact polynomial in t.
pub(crate) fn coeffs_to_string(coeffs: &[BigUint]) -> String {
    let mut parts = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let part = match (i, c.is_one()) {
            (0, _) => format!("{}", c),
            (1, true) => "t".to_string(),
            (1, false) => format!("{}*t", c),
            (_, true) => format!("t^{}", i),
            (_, false) => format!("{}*t^{}", c, i),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", coeffs_to_string(&self.coeffs))
    }
}

/// Returns the lexicographically smallest monic irreducible polynomial of
/// degree d over F_p, coefficients compared from the constant term upward.
/// Deterministic, so field construction is reproducible.
pub fn find_irreducible(p: &BigUint, d: usize) -> Result<Vec<BigUint>> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{} is not prime", p)));
    }
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be >= 1".into()));
    }
    // Counter over (c_0, ..., c_{d-1}) in lexicographic order: c_0 is the
    // most significant digit, c_{d-1} ticks fastest.
    let mut digits = vec![BigUint::zero(); d];
    loop {
        let mut f = digits.clone();
        f.push(BigUint::one());
        if is_irreducible(p, &f) {
            return Ok(f);
        }
        let mut i = d;
        loop {
            if i == 0 {
                unreachable!("an irreducible polynomial of every degree exists");
            }
            i -= 1;
            digits[i] += 1u32;
            if digits[i] < *p {
                break;
            }
            digits[i] = BigUint::zero();
        }
    }
}

fn trim(v: &mut Vec<BigUint>) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

/// Remainder of a by the monic polynomial m, over F_p. Dense, constant first.
fn poly_rem(p: &BigUint, a: &[BigUint], m: &[BigUint]) -> Vec<BigUint> {
    let dm = m.len() - 1;
    let mut r: Vec<BigUint> = a.to_vec();
    trim(&mut r);
    while r.len() > dm {
        let lead = r.last().unwrap().clone();
        let shift = r.len() - 1 - dm;
        if !lead.is_zero() {
            for i in 0..dm {
                let sub = &lead * &m[i] % p;
                let idx = shift + i;
                r[idx] = if r[idx] >= sub {
                    &r[idx] - sub
                } else {
                    &r[idx] + p - sub
                };
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn poly_mulmod(p: &BigUint, a: &[BigUint], b: &[BigUint], m: &[BigUint]) -> Vec<BigUint> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = &prod[i + j] + x * y;
        }
    }
    for c in prod.iter_mut() {
        *c = &*c % p;
    }
    poly_rem(p, &prod, m)
}

/// t^e mod m over F_p, by square and multiply.
fn poly_powmod_t(p: &BigUint, e: &BigUint, m: &[BigUint]) -> Vec<BigUint> {
    let mut result = vec![BigUint::one()];
    let mut base = poly_rem(p, &[BigUint::zero(), BigUint::one()], m);
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            result = poly_mulmod(p, &result, &base, m);
        }
        if i + 1 < bits {
            base = poly_mulmod(p, &base, &base, m);
        }
    }
    result
}

fn poly_gcd(p: &BigUint, a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // Make b monic before taking the remainder.
        let lead = b.last().unwrap().clone();
        if !lead.is_one() {
            let inv = mod_inverse(&lead, p);
            for c in b.iter_mut() {
                *c = &*c * &inv % p;
            }
        }
        let r = poly_rem(p, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn mod_inverse(a: &BigUint, p: &BigUint) -> BigUint {
    // p prime, a nonzero mod p.
    a.modpow(&(p - 2u32), p)
}

/// Rabin irreducibility test for a monic polynomial over F_p.
pub fn is_irreducible(p: &BigUint, f: &[BigUint]) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    // t^(p^d) == t mod f
    let q = p.pow(d as u32);
    let tp = poly_powmod_t(p, &q, f);
    let mut t_only = vec![BigUint::zero(), BigUint::one()];
    t_only = poly_rem(p, &t_only, f);
    if tp != t_only {
        return false;
    }
    // gcd(t^(p^(d/l)) - t, f) == 1 for every prime l dividing d
    for l in prime_factors(d) {
        let e = p.pow((d / l) as u32);
        let mut g = poly_powmod_t(p, &e, f);
        // g -= t
        while g.len() < 2 {
            g.push(BigUint::zero());
        }
        g[1] = if g[1].is_zero() {
            p - 1u32
        } else {
            &g[1] - 1u32
        };
        trim(&mut g);
        let gcd = poly_gcd(p, f, &g);
        if gcd.len() != 1 {
            return false;
        }
    }
    true
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Deterministic Miller-Rabin for moduli below 2^64, fixed witness set above.
pub fn is_prime(n: &BigUint) -> bool {
    if *n < BigUint::from(2u32) {
        return false;
    }
    let small = [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for s in small {
        let s = BigUint::from(s);
        if *n == s {
            return true;
        }
        if (n % &s).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let mut r = 0u32;
    while (&d % &two).is_zero() {
        d >>= 1;
        r += 1;
    }
    // These witnesses are deterministic for n < 3.3 * 10^24.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = BigUint::from(a) % n;
        if a.is_zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 0..r.saturating_sub(1) {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn find_irreducible_degree_one() {
        // p=2, d=1: candidates t then t+1; t is irreducible.
        let f = find_irreducible(&big(2), 1).unwrap();
        assert_eq!(f, vec![big(0), big(1)]);
    }

    #[test]
    fn find_irreducible_f4() {
        // Unique irreducible quadratic over F_2.
        let f = find_irreducible(&big(2), 2).unwrap();
        assert_eq!(f, vec![big(1), big(1), big(1)]);
    }

    #[test]
    fn find_irreducible_f9_brute_force() {
        // Oracle: exhaustively check the returned quadratic has no root in F_3
        // and is the lex-smallest such.
        let f = find_irreducible(&big(3), 2).unwrap();
        let eval = |f: &[BigUint], x: u64| -> u64 {
            let mut acc = 0u64;
            for c in f.iter().rev() {
                let c: u64 = c.try_into().unwrap();
                acc = (acc * x + c) % 3;
            }
            acc
        };
        for x in 0..3 {
            assert_ne!(eval(&f, x), 0, "root {} found", x);
        }
        // Lex-smaller candidates must all be reducible (have a root, since
        // degree 2 reducible over a field means a linear factor).
        let target: Vec<u64> = f.iter().map(|c| c.try_into().unwrap()).collect();
        for c0 in 0..3u64 {
            for c1 in 0..3u64 {
                if [c0, c1, 1].to_vec() >= target {
                    continue;
                }
                let cand = vec![big(c0), big(c1), big(1)];
                assert!((0..3).any(|x| eval(&cand, x) == 0));
            }
        }
    }

    #[test]
    fn f4_multiplication() {
        // In F_4 = F_2[t]/(t^2+t+1): t * t = t + 1.
        let k = FqField::new(big(2), 2).unwrap();
        let t = k.generator();
        let t1 = k.add(&t, &k.one());
        assert_eq!(k.mul(&t, &t), t1);
    }

    #[test]
    fn f4_frobenius_and_root() {
        let k = FqField::new(big(2), 2).unwrap();
        let t = k.generator();
        let t1 = k.add(&t, &k.one());
        assert_eq!(k.frobenius(&t, 1), t1);
        assert_eq!(k.pth_root(&t1, 1), t);
        assert_eq!(k.frobenius(&t, 0), t);
    }

    #[test]
    fn prime_field_frobenius_is_identity() {
        let k = FqField::new(big(7), 1).unwrap();
        for v in 0..7 {
            let x = k.from_natural(big(v));
            for r in 0..4 {
                assert_eq!(k.frobenius(&x, r), x);
            }
        }
    }

    #[test]
    fn inverse_law() {
        let k = FqField::new(big(5), 2).unwrap();
        let mut x = k.generator();
        for _ in 0..20 {
            x = k.add(&k.mul(&x, &x), &k.one());
            if k.is_zero(&x) {
                continue;
            }
            let inv = k.inv(&x).unwrap();
            assert_eq!(k.mul(&x, &inv), k.one());
        }
        assert_eq!(k.inv(&k.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn frobenius_root_inverse_pair() {
        for (p, d) in [(2u64, 3usize), (3, 2), (5, 1)] {
            let k = FqField::new(big(p), d).unwrap();
            let mut x = k.generator();
            for r in 0..(3 * d as u32 + 1) {
                x = k.add(&k.mul(&x, &x), &k.one());
                assert_eq!(k.pth_root(&k.frobenius(&x, r), r), x);
                assert_eq!(k.frobenius(&k.pth_root(&x, r), r), x);
            }
        }
    }

    #[test]
    fn frobenius_is_ring_homomorphism() {
        let k = FqField::new(big(3), 3).unwrap();
        let mut x = k.generator();
        let mut y = k.add(&k.generator(), &k.one());
        for _ in 0..25 {
            x = k.add(&k.mul(&x, &x), &k.one());
            y = k.add(&k.mul(&y, &x), &k.generator());
            assert_eq!(
                k.frobenius(&k.add(&x, &y), 1),
                k.add(&k.frobenius(&x, 1), &k.frobenius(&y, 1))
            );
            assert_eq!(
                k.frobenius(&k.mul(&x, &y), 1),
                k.mul(&k.frobenius(&x, 1), &k.frobenius(&y, 1))
            );
        }
    }

    #[test]
    fn explicit_modulus_validation() {
        // t^2 + 1 is reducible over F_2.
        assert!(FqField::with_modulus(big(2), vec![big(1), big(0), big(1)]).is_err());
        // t^2 + t + 1 is fine.
        assert!(FqField::with_modulus(big(2), vec![big(1), big(1), big(1)]).is_ok());
        assert!(FqField::with_modulus(big(4), vec![big(1), big(1)]).is_err());
    }
}
