//! Sparse multivariate polynomial arithmetic over a pluggable coefficient
//! ring (F_q, GR(p^n,d) or the integers), plus the characteristic-p
//! Frobenius and the coefficient transport between F_q[X] and GR[X].

mod kernel;
pub mod parse;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fq::{FqElement, FqField};
use crate::gr::{GaloisRing, GrElement};

pub use kernel::U64Model;

/// FxHash variant; term maps are hot enough that SipHash shows up in profiles.
#[derive(Default)]
pub struct FxHasher {
    hash: u64,
}

impl Hasher for FxHasher {
    #[inline]
    fn write(&mut self, bytes: &[u8]) {
        for chunk in bytes.chunks(8) {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            self.write_u64(u64::from_le_bytes(buf));
        }
    }
    #[inline]
    fn write_u64(&mut self, v: u64) {
        self.hash = (self.hash.rotate_left(5) ^ v).wrapping_mul(0x517cc1b727220a95);
    }
    #[inline]
    fn write_u32(&mut self, v: u32) {
        self.write_u64(v as u64);
    }
    #[inline]
    fn write_usize(&mut self, v: usize) {
        self.write_u64(v as u64);
    }
    #[inline]
    fn finish(&self) -> u64 {
        self.hash
    }
}

pub type TermMap<V> = HashMap<Vec<u32>, V, BuildHasherDefault<FxHasher>>;

/// One printable piece of a coefficient: sign, scalar and power of t.
#[derive(Debug, Clone)]
pub struct CoeffAtom {
    pub negative: bool,
    pub scalar: BigUint,
    pub t_power: u32,
}

/// A commutative coefficient ring the polynomial layer can compute over.
pub trait CoeffRing: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, e: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Decomposition of a coefficient for the text grammar (scalar * t^j pieces).
    fn text_atoms(&self, e: &Self::Elem) -> Vec<CoeffAtom>;
    /// Builds scalar * t^j; the parser negates separately via `neg`.
    fn from_text_atom(&self, scalar: &BigUint, t_power: u32) -> Result<Self::Elem>;

    /// Fixed-width model for the fast multiplication kernel, when the ring
    /// modulus fits a machine word. `None` forces the generic path.
    fn u64_model(&self) -> Option<U64Model> {
        None
    }
    fn elem_to_words(&self, _e: &Self::Elem) -> Vec<u64> {
        unreachable!("ring has no u64 model")
    }
    fn elem_from_words(&self, _w: &[u64]) -> Self::Elem {
        unreachable!("ring has no u64 model")
    }
}

fn biguint_fits_u64(v: &BigUint) -> Option<u64> {
    u64::try_from(v).ok()
}

impl CoeffRing for FqField {
    type Elem = FqElement;

    fn zero(&self) -> FqElement {
        FqField::zero(self)
    }
    fn one(&self) -> FqElement {
        FqField::one(self)
    }
    fn is_zero(&self, e: &FqElement) -> bool {
        FqField::is_zero(self, e)
    }
    fn add(&self, a: &FqElement, b: &FqElement) -> FqElement {
        FqField::add(self, a, b)
    }
    fn sub(&self, a: &FqElement, b: &FqElement) -> FqElement {
        FqField::sub(self, a, b)
    }
    fn neg(&self, a: &FqElement) -> FqElement {
        FqField::neg(self, a)
    }
    fn mul(&self, a: &FqElement, b: &FqElement) -> FqElement {
        FqField::mul(self, a, b)
    }

    fn text_atoms(&self, e: &FqElement) -> Vec<CoeffAtom> {
        e.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| CoeffAtom {
                negative: false,
                scalar: c.clone(),
                t_power: j as u32,
            })
            .collect()
    }

    fn from_text_atom(&self, scalar: &BigUint, t_power: u32) -> Result<FqElement> {
        let t = self.generator();
        let tp = self.pow(&t, &BigUint::from(t_power));
        Ok(self.mul(&self.from_natural(scalar.clone()), &tp))
    }

    fn u64_model(&self) -> Option<U64Model> {
        let m = biguint_fits_u64(self.p())?;
        let red = self
            .modulus()
            .iter()
            .take(self.degree())
            .map(biguint_fits_u64)
            .collect::<Option<Vec<_>>>()?;
        Some(U64Model::new(m, self.degree(), red))
    }
    fn elem_to_words(&self, e: &FqElement) -> Vec<u64> {
        e.coeffs().iter().map(|c| u64::try_from(c).unwrap()).collect()
    }
    fn elem_from_words(&self, w: &[u64]) -> FqElement {
        self.from_coeffs(&w.iter().map(|&v| BigUint::from(v)).collect::<Vec<_>>())
    }
}

impl CoeffRing for GaloisRing {
    type Elem = GrElement;

    fn zero(&self) -> GrElement {
        GaloisRing::zero(self)
    }
    fn one(&self) -> GrElement {
        GaloisRing::one(self)
    }
    fn is_zero(&self, e: &GrElement) -> bool {
        GaloisRing::is_zero(self, e)
    }
    fn add(&self, a: &GrElement, b: &GrElement) -> GrElement {
        GaloisRing::add(self, a, b)
    }
    fn sub(&self, a: &GrElement, b: &GrElement) -> GrElement {
        GaloisRing::sub(self, a, b)
    }
    fn neg(&self, a: &GrElement) -> GrElement {
        GaloisRing::neg(self, a)
    }
    fn mul(&self, a: &GrElement, b: &GrElement) -> GrElement {
        GaloisRing::mul(self, a, b)
    }

    fn text_atoms(&self, e: &GrElement) -> Vec<CoeffAtom> {
        e.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| CoeffAtom {
                negative: false,
                scalar: c.clone(),
                t_power: j as u32,
            })
            .collect()
    }

    fn from_text_atom(&self, scalar: &BigUint, t_power: u32) -> Result<GrElement> {
        let mut tp = self.one();
        if t_power > 0 {
            let mut coeffs = vec![BigUint::zero(); self.degree()];
            if self.degree() == 1 {
                // t is the root of the linear modulus.
                let c0 = self.residue_field().modulus()[0].clone();
                coeffs[0] = if c0.is_zero() {
                    BigUint::zero()
                } else {
                    self.pn() - c0
                };
            } else {
                coeffs[1] = BigUint::one();
            }
            let t = self.from_coeffs(&coeffs);
            tp = self.pow(&t, &BigUint::from(t_power));
        }
        Ok(self.mul(&self.from_natural(scalar.clone()), &tp))
    }

    fn u64_model(&self) -> Option<U64Model> {
        let m = biguint_fits_u64(self.pn())?;
        let red = self
            .residue_field()
            .modulus()
            .iter()
            .take(self.degree())
            .map(biguint_fits_u64)
            .collect::<Option<Vec<_>>>()?;
        Some(U64Model::new(m, self.degree(), red))
    }
    fn elem_to_words(&self, e: &GrElement) -> Vec<u64> {
        e.coeffs().iter().map(|c| u64::try_from(c).unwrap()).collect()
    }
    fn elem_from_words(&self, w: &[u64]) -> GrElement {
        self.from_coeffs(&w.iter().map(|&v| BigUint::from(v)).collect::<Vec<_>>())
    }
}

/// The integers, optionally working modulo a fixed natural number M with
/// canonical residues in [0, M). Used by the naive Witt polynomial tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerRing {
    modulus: Option<BigUint>,
}

impl IntegerRing {
    pub fn integers() -> Self {
        IntegerRing { modulus: None }
    }

    pub fn modulo(m: BigUint) -> Self {
        assert!(!m.is_zero());
        IntegerRing { modulus: Some(m) }
    }

    pub fn modulus(&self) -> Option<&BigUint> {
        self.modulus.as_ref()
    }

    fn reduce(&self, v: BigInt) -> BigInt {
        match &self.modulus {
            None => v,
            Some(m) => {
                let m = BigInt::from(m.clone());
                let r = v % &m;
                if r.is_negative() {
                    r + m
                } else {
                    r
                }
            }
        }
    }
}

impl CoeffRing for IntegerRing {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, e: &BigInt) -> bool {
        e.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(a + b)
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(a - b)
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        self.reduce(-a)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(a * b)
    }

    fn text_atoms(&self, e: &BigInt) -> Vec<CoeffAtom> {
        vec![CoeffAtom {
            negative: e.is_negative(),
            scalar: e.magnitude().clone(),
            t_power: 0,
        }]
    }

    fn from_text_atom(&self, scalar: &BigUint, t_power: u32) -> Result<BigInt> {
        if t_power > 0 {
            return Err(Error::InvalidParameter(
                "generator t is not valid in an integer polynomial".into(),
            ));
        }
        Ok(self.reduce(BigInt::from_biguint(Sign::Plus, scalar.clone())))
    }

    fn u64_model(&self) -> Option<U64Model> {
        let m = biguint_fits_u64(self.modulus.as_ref()?)?;
        Some(U64Model::new(m, 1, vec![0]))
    }
    fn elem_to_words(&self, e: &BigInt) -> Vec<u64> {
        vec![u64::try_from(e.magnitude()).unwrap()]
    }
    fn elem_from_words(&self, w: &[u64]) -> BigInt {
        BigInt::from(w[0])
    }
}

/// Graded lexicographic comparison: total degree first, then entrywise from
/// the first variable.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let ta: u64 = a.iter().map(|&e| e as u64).sum();
    let tb: u64 = b.iter().map(|&e| e as u64).sum();
    ta.cmp(&tb).then_with(|| a.cmp(b))
}

/// Largest k <= cap with every entry of u divisible by p^k. The all-zero
/// monomial hits the cap because zero is divisible by everything.
pub fn monomial_p_valuation(u: &[u32], p: &BigUint, cap: u32) -> u32 {
    let p64 = match u64::try_from(p) {
        Ok(v) => v,
        // p beyond u64 divides no positive exponent below u32::MAX.
        Err(_) => {
            return if u.iter().all(|&e| e == 0) { cap } else { 0 };
        }
    };
    let mut val = cap;
    for &e in u {
        if e == 0 {
            continue;
        }
        let mut v = 0u32;
        let mut e = e as u64;
        while v < val && e % p64 == 0 {
            e /= p64;
            v += 1;
        }
        val = val.min(v);
        if val == 0 {
            break;
        }
    }
    val
}

/// A sparse multivariate polynomial: a finite map from exponent vectors of
/// fixed length `nvars` to nonzero coefficients.
#[derive(Debug, Clone)]
pub struct Poly<R: CoeffRing> {
    ring: R,
    nvars: usize,
    terms: TermMap<R::Elem>,
}

impl<R: CoeffRing> PartialEq for Poly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.nvars == other.nvars && self.terms == other.terms
    }
}
impl<R: CoeffRing> Eq for Poly<R> where R::Elem: Eq {}

impl<R: CoeffRing> Poly<R> {
    pub fn zero(ring: R, nvars: usize) -> Self {
        Poly {
            ring,
            nvars,
            terms: TermMap::default(),
        }
    }

    pub fn constant(ring: R, nvars: usize, c: R::Elem) -> Self {
        let mut p = Poly::zero(ring, nvars);
        if !p.ring.is_zero(&c) {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(ring: R, nvars: usize) -> Self {
        let c = ring.one();
        Poly::constant(ring, nvars, c)
    }

    /// The monomial X_{idx} (0-based index).
    pub fn variable(ring: R, nvars: usize, idx: usize) -> Self {
        assert!(idx < nvars, "variable index out of range");
        let mut exps = vec![0u32; nvars];
        exps[idx] = 1;
        let c = ring.one();
        let mut p = Poly::zero(ring, nvars);
        p.terms.insert(exps, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, R::Elem)>>(
        ring: R,
        nvars: usize,
        terms: I,
    ) -> Self {
        let mut p = Poly::zero(ring, nvars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "monomial arity mismatch");
            p.add_term(exps, c);
        }
        p
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &R::Elem)> {
        self.terms.iter()
    }

    /// Terms sorted in descending graded-lex order, for canonical output.
    pub fn sorted_terms(&self) -> Vec<(&Vec<u32>, &R::Elem)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex_cmp(b.0, a.0));
        v
    }

    pub fn coefficient(&self, exps: &[u32]) -> R::Elem {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u64).sum())
            .max()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: R::Elem) {
        if self.ring.is_zero(&c) {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = self.ring.add(e.get(), &c);
                if self.ring.is_zero(&s) {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    fn assert_compatible(&self, other: &Self) {
        assert!(
            self.ring == other.ring && self.nvars == other.nvars,
            "polynomial contexts differ"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), self.ring.neg(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Poly::zero(self.ring.clone(), self.nvars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), self.ring.neg(c));
        }
        out
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = Poly::zero(self.ring.clone(), self.nvars);
        if self.ring.is_zero(c) {
            return out;
        }
        for (e, v) in &self.terms {
            out.add_term(e.clone(), self.ring.mul(v, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.ring.clone(), self.nvars);
        }
        if let Some(model) = self.ring.u64_model() {
            let square = std::ptr::eq(self, other);
            return kernel::mul_u64(self, other, &model, square);
        }
        self.mul_generic(other)
    }

    pub(crate) fn mul_generic(&self, other: &Self) -> Self {
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = Poly::zero(self.ring.clone(), self.nvars);
        for (ea, ca) in &small.terms {
            for (eb, cb) in &large.terms {
                let exps: Vec<u32> = ea
                    .iter()
                    .zip(eb)
                    .map(|(x, y)| x.checked_add(*y).expect("exponent overflow"))
                    .collect();
                out.add_term(exps, self.ring.mul(ca, cb));
            }
        }
        out
    }

    /// Exponentiation. For a base with few terms, repeated multiplication
    /// by the base beats binary powering: the partial result only ever
    /// meets the small base, never another large intermediate square.
    /// No characteristic-p shortcut; see `Poly::<FqField>::pow_char`.
    pub fn pow(&self, e: u64) -> Self {
        if e == 0 {
            return Poly::one(self.ring.clone(), self.nvars);
        }
        let iterative_limit = if self.ring.u64_model().is_some() { 4 } else { 32 };
        if self.num_terms() <= iterative_limit {
            let mut result = self.clone();
            for _ in 1..e {
                result = result.mul(self);
            }
            return result;
        }
        let mut result: Option<Poly<R>> = None;
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        result.unwrap()
    }

    /// Substitutes `args[i]` for variable i. All arguments must live in the
    /// same coefficient ring and variable count.
    pub fn evaluate(&self, args: &[Poly<R>]) -> Result<Poly<R>> {
        if args.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: args.len(),
            });
        }
        let m = args.first().map(|a| a.nvars).unwrap_or(0);
        for a in args {
            if a.ring != self.ring || a.nvars != m {
                return Err(Error::ContextMismatch(
                    "evaluation arguments have inconsistent contexts".into(),
                ));
            }
        }
        let mut out = Poly::zero(self.ring.clone(), m);
        let mut power_cache: Vec<HashMap<u32, Poly<R>>> =
            (0..self.nvars).map(|_| HashMap::new()).collect();
        for (exps, c) in &self.terms {
            let mut term = Poly::constant(self.ring.clone(), m, c.clone());
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = power_cache[i]
                    .entry(e)
                    .or_insert_with(|| args[i].pow(e as u64))
                    .clone();
                term = term.mul(&pw);
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Canonical text form with explicit variable names.
    pub fn to_string_with(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        let mut pieces: Vec<(bool, String)> = Vec::new();
        for (exps, c) in self.sorted_terms() {
            let mut atoms = self.ring.text_atoms(c);
            atoms.sort_by(|a, b| b.t_power.cmp(&a.t_power));
            for atom in atoms {
                let mut factors: Vec<String> = Vec::new();
                let mono_empty = exps.iter().all(|&e| e == 0);
                if !atom.scalar.is_one() || (atom.t_power == 0 && mono_empty) {
                    factors.push(atom.scalar.to_string());
                }
                if atom.t_power == 1 {
                    factors.push("t".into());
                } else if atom.t_power > 1 {
                    factors.push(format!("t^{}", atom.t_power));
                }
                for (i, &e) in exps.iter().enumerate() {
                    if e == 1 {
                        factors.push(names[i].clone());
                    } else if e > 1 {
                        factors.push(format!("{}^{}", names[i], e));
                    }
                }
                pieces.push((atom.negative, factors.join("*")));
            }
        }
        if pieces.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (neg, text)) in pieces.iter().enumerate() {
            if i == 0 {
                if *neg {
                    out.push('-');
                }
            } else {
                out.push_str(if *neg { " - " } else { " + " });
            }
            out.push_str(text);
        }
        out
    }
}

pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("X{}", i)).collect()
}

impl<R: CoeffRing> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&default_names(self.nvars)))
    }
}

impl Poly<FqField> {
    /// P^(p^r), computed termwise: exponents scale by p^r and coefficients
    /// pass through the field Frobenius. Exact in characteristic p.
    pub fn frobenius(&self, r: u32) -> Self {
        if r == 0 {
            return self.clone();
        }
        let p = u64::try_from(self.ring.p()).expect("Frobenius exponent overflow");
        let pr = p
            .checked_pow(r)
            .and_then(|v| u32::try_from(v).ok())
            .expect("Frobenius exponent overflow");
        let mut out = Poly::zero(self.ring.clone(), self.nvars);
        for (exps, c) in &self.terms {
            let scaled: Vec<u32> = exps
                .iter()
                .map(|&e| e.checked_mul(pr).expect("exponent overflow"))
                .collect();
            out.terms.insert(scaled, self.ring.frobenius(c, r));
        }
        out
    }

    /// The inverse of `frobenius`: exponents divide by p^r and coefficients
    /// take p^r-th roots. Fails if some exponent is not divisible by p^r.
    pub fn inv_frobenius(&self, r: u32) -> Result<Self> {
        if r == 0 {
            return Ok(self.clone());
        }
        let p = u64::try_from(self.ring.p()).expect("Frobenius exponent overflow");
        let pr = p
            .checked_pow(r)
            .and_then(|v| u32::try_from(v).ok())
            .expect("Frobenius exponent overflow");
        let mut out = Poly::zero(self.ring.clone(), self.nvars);
        for (exps, c) in &self.terms {
            let mut divided = Vec::with_capacity(exps.len());
            for &e in exps {
                if e % pr != 0 {
                    return Err(Error::NotAPthPower {
                        power: r,
                        exponent: e,
                    });
                }
                divided.push(e / pr);
            }
            out.terms.insert(divided, self.ring.pth_root(c, r));
        }
        Ok(out)
    }

    /// P^e using the base-p digits of e: products of small powers of
    /// Frobenius twists. Much faster than binary exponentiation for the
    /// p-power towers, and exact over F_q.
    pub fn pow_char(&self, e: u64) -> Self {
        if e == 0 {
            return Poly::one(self.ring.clone(), self.nvars);
        }
        let p = match u64::try_from(self.ring.p()) {
            Ok(v) => v,
            Err(_) => return self.pow(e),
        };
        let mut digits = Vec::new();
        let mut rest = e;
        while rest > 0 {
            digits.push(rest % p);
            rest /= p;
        }
        let mut result: Option<Poly<FqField>> = None;
        for (k, &digit) in digits.iter().enumerate() {
            if digit == 0 {
                continue;
            }
            let twisted = self.frobenius(k as u32);
            let piece = twisted.pow(digit);
            result = Some(match result {
                None => piece,
                Some(r) => r.mul(&piece),
            });
        }
        result.unwrap()
    }
}

impl Poly<GaloisRing> {
    /// Coefficientwise exact division by p^j; see `GaloisRing::exact_div_p`.
    pub fn exact_div_p(&self, j: u32) -> Result<Self> {
        if j == 0 {
            return Ok(self.clone());
        }
        let mut out = Poly::zero(self.ring.clone(), self.nvars);
        for (exps, c) in &self.terms {
            let v = self.ring.exact_div_p(c, j)?;
            // Division never maps a nonzero canonical residue to zero.
            out.terms.insert(exps.clone(), v);
        }
        Ok(out)
    }

    /// Reduces every coefficient mod p^{n-j}, discarding meaningless digits.
    pub fn truncate_precision(&self, j: u32) -> Self {
        if j == 0 {
            return self.clone();
        }
        let mut out = Poly::zero(self.ring.clone(), self.nvars);
        for (exps, c) in &self.terms {
            let v = self.ring.truncate_precision(c, j);
            if !GaloisRing::is_zero(&self.ring, &v) {
                out.terms.insert(exps.clone(), v);
            }
        }
        out
    }
}

/// Coefficientwise digit lift F_q[X] -> GR(p^n,d)[X].
pub fn lift_poly(p: &Poly<FqField>, gr: &GaloisRing) -> Poly<GaloisRing> {
    assert_eq!(p.ring(), gr.residue_field(), "incompatible contexts");
    let mut out = Poly::zero(gr.clone(), p.nvars());
    for (exps, c) in p.terms() {
        out.terms.insert(exps.clone(), gr.lift(c));
    }
    out
}

/// Coefficientwise projection GR(p^n,d)[X] -> F_q[X]; a ring homomorphism.
pub fn project_poly(p: &Poly<GaloisRing>) -> Poly<FqField> {
    let gr = p.ring().clone();
    let field = gr.residue_field().clone();
    let mut out = Poly::zero(field, p.nvars());
    for (exps, c) in p.terms() {
        let v = gr.reduce(c);
        if !CoeffRing::is_zero(out.ring(), &v) {
            out.terms.insert(exps.clone(), v);
        }
    }
    out
}

#[cfg(test)]
mod tests;
