//! The classical construction: the structure polynomials S_i (sum) and
//! P_i (product) in Z[X_0..X_{n-1}, Y_0..Y_{n-1}], built recursively from
//! the ghost polynomials, then evaluated coordinatewise over F_q[X].
//!
//! Variables 0..n-1 are X_0..X_{n-1}, variables n..2n-1 are Y_0..Y_{n-1}.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::fq::FqField;
use crate::poly::{IntegerRing, Poly};
use crate::witt::{WittVector, WittContext};

/// Coefficient arithmetic used while building the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableKind {
    /// Full integer coefficients; the reference construction.
    Integers,
    /// Coefficients reduced mod p, built level by level mod p^{i+1}.
    /// This is the table the naive backend evaluates.
    ModP,
}

#[derive(Debug, Clone)]
pub struct NaiveTable {
    p: BigUint,
    n: u32,
    kind: TableKind,
    sums: Vec<Poly<IntegerRing>>,
    prods: Vec<Poly<IntegerRing>>,
}

impl NaiveTable {
    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn sum_poly(&self, i: usize) -> &Poly<IntegerRing> {
        &self.sums[i]
    }

    pub fn prod_poly(&self, i: usize) -> &Poly<IntegerRing> {
        &self.prods[i]
    }

    pub fn sum_monomials(&self, i: usize) -> usize {
        self.sums[i].num_terms()
    }

    pub fn prod_monomials(&self, i: usize) -> usize {
        self.prods[i].num_terms()
    }

    /// One polynomial per line: S_0..S_{n-1} then P_0..P_{n-1}, over the
    /// variables X0..X{n-1}, Y0..Y{n-1}.
    pub fn export_lines(&self) -> String {
        let n = self.n as usize;
        let mut names: Vec<String> = (0..n).map(|i| format!("X{}", i)).collect();
        names.extend((0..n).map(|i| format!("Y{}", i)));
        let mut out = String::new();
        for s in &self.sums {
            out.push_str(&s.to_string_with(&names));
            out.push('\n');
        }
        for p in &self.prods {
            out.push_str(&p.to_string_with(&names));
            out.push('\n');
        }
        out
    }
}

fn p_to_u64(p: &BigUint) -> u64 {
    p.to_u64().expect("p too large for power towers")
}

/// F_i over the chosen coefficient ring: sum_{l<=i} p^l V_{offset+l}^{p^{i-l}}.
pub fn ghost_polynomial(
    ring: &IntegerRing,
    nvars: usize,
    p: &BigUint,
    i: u32,
    offset: usize,
) -> Poly<IntegerRing> {
    let pu = p_to_u64(p);
    let mut acc = Poly::zero(ring.clone(), nvars);
    for l in 0..=i {
        let exp = pu.checked_pow(i - l).expect("p^k exponent overflow");
        let scalar = BigInt::from(p.pow(l));
        let term = Poly::variable(ring.clone(), nvars, offset + l as usize)
            .pow(exp)
            .scale(&scalar);
        acc = acc.add(&term);
    }
    acc
}

/// Divides every coefficient by p^i, rebuilding in `target`. The division
/// must be exact; a remainder means the construction itself is broken.
fn exact_div(
    poly: &Poly<IntegerRing>,
    p: &BigUint,
    i: u32,
    target: &IntegerRing,
) -> Result<Poly<IntegerRing>> {
    let divisor = BigInt::from(p.pow(i));
    let mut terms = Vec::with_capacity(poly.num_terms());
    for (exps, coeff) in poly.terms() {
        let (q, r) = coeff.div_rem(&divisor);
        if !r.is_zero() {
            return Err(Error::NotDivisible { power: i });
        }
        terms.push((exps.clone(), q));
    }
    Ok(Poly::from_terms(target.clone(), poly.nvars(), terms))
}

/// Rebuilds a polynomial with the same coefficients in a larger-modulus
/// ring; canonical residues stay valid.
fn reinterpret(poly: &Poly<IntegerRing>, target: &IntegerRing) -> Poly<IntegerRing> {
    Poly::from_terms(
        target.clone(),
        poly.nvars(),
        poly.terms().map(|(e, c)| (e.clone(), c.clone())),
    )
}

/// Builds S_0..S_{n-1} and P_0..P_{n-1}.
///
/// For `ModP`, level i is carried out mod p^{i+1}: the stored mod-p level-l
/// polynomials lift to representatives congruent mod p, and a ≡ b (mod p^k)
/// gives a^p ≡ b^p (mod p^{k+1}), so S_l^{p^{i-l}} is correct mod p^{i-l+1}
/// and p^l S_l^{p^{i-l}} is correct mod p^{i+1}.
pub fn build_table(p: &BigUint, n: u32, kind: TableKind) -> Result<NaiveTable> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let nv = 2 * n as usize;
    let pu = p_to_u64(p);
    let level_ring = |i: u32| match kind {
        TableKind::Integers => IntegerRing::integers(),
        TableKind::ModP => IntegerRing::modulo(p.pow(i + 1)),
    };
    let store_ring = match kind {
        TableKind::Integers => IntegerRing::integers(),
        TableKind::ModP => IntegerRing::modulo(p.clone()),
    };

    let x0 = Poly::variable(store_ring.clone(), nv, 0);
    let y0 = Poly::variable(store_ring.clone(), nv, n as usize);
    let mut sums = vec![x0.add(&y0)];
    let mut prods = vec![x0.mul(&y0)];

    for i in 1..n {
        let ring_i = level_ring(i);
        let fx = ghost_polynomial(&ring_i, nv, p, i, 0);
        let fy = ghost_polynomial(&ring_i, nv, p, i, n as usize);
        let mut num_s = fx.add(&fy);
        let mut num_p = fx.mul(&fy);
        for l in 0..i {
            let exp = pu.checked_pow(i - l).expect("p^k exponent overflow");
            let scalar = BigInt::from(p.pow(l));
            let sl = reinterpret(&sums[l as usize], &ring_i);
            let pl = reinterpret(&prods[l as usize], &ring_i);
            num_s = num_s.sub(&sl.pow(exp).scale(&scalar));
            num_p = num_p.sub(&pl.pow(exp).scale(&scalar));
        }
        sums.push(exact_div(&num_s, p, i, &store_ring)?);
        prods.push(exact_div(&num_p, p, i, &store_ring)?);
    }

    Ok(NaiveTable {
        p: p.clone(),
        n,
        kind,
        sums,
        prods,
    })
}

static TABLE_CACHE: Lazy<Mutex<HashMap<(BigUint, u32, TableKind), Arc<NaiveTable>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Returns the cached table, building it first if needed. The build runs
/// outside the lock; a racing duplicate build is idempotent.
pub fn get_table(p: &BigUint, n: u32, kind: TableKind) -> Result<Arc<NaiveTable>> {
    let key = (p.clone(), n, kind);
    if let Some(t) = TABLE_CACHE.lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let table = Arc::new(build_table(p, n, kind)?);
    TABLE_CACHE
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| table.clone());
    Ok(table)
}

/// True once the mod-p table for (p, n) has been built and cached.
pub fn table_is_cached(p: &BigUint, n: u32, kind: TableKind) -> bool {
    TABLE_CACHE
        .lock()
        .unwrap()
        .contains_key(&(p.clone(), n, kind))
}

/// Per-call cache of args[v]^e, computed with the Frobenius-aware power.
struct PowerCache<'a> {
    args: &'a [Poly<FqField>],
    cache: HashMap<(usize, u32), Poly<FqField>>,
}

impl<'a> PowerCache<'a> {
    fn new(args: &'a [Poly<FqField>]) -> Self {
        PowerCache {
            args,
            cache: HashMap::new(),
        }
    }

    fn power(&mut self, var: usize, e: u32) -> Poly<FqField> {
        if let Some(p) = self.cache.get(&(var, e)) {
            return p.clone();
        }
        let p = self.args[var].pow_char(e as u64);
        self.cache.insert((var, e), p.clone());
        p
    }
}

/// Evaluates one structure polynomial at the 2n coordinate polynomials.
fn eval_structure(
    poly: &Poly<IntegerRing>,
    field: &FqField,
    m: usize,
    cache: &mut PowerCache,
) -> Poly<FqField> {
    let mut acc = Poly::zero(field.clone(), m);
    for (exps, coeff) in poly.terms() {
        debug_assert!(!coeff.is_negative());
        let c = field.from_natural(coeff.magnitude().clone());
        let mut term = Poly::constant(field.clone(), m, c);
        for (v, &e) in exps.iter().enumerate() {
            if e > 0 {
                term = term.mul(&cache.power(v, e));
            }
        }
        acc = acc.add(&term);
    }
    acc
}

fn op_coords(
    ctx: &WittContext,
    a: &[Poly<FqField>],
    b: &[Poly<FqField>],
    prod: bool,
) -> Result<Vec<Poly<FqField>>> {
    let table = get_table(ctx.p(), ctx.n(), TableKind::ModP)?;
    let args: Vec<Poly<FqField>> = a.iter().chain(b.iter()).cloned().collect();
    let mut cache = PowerCache::new(&args);
    let polys = if prod { &table.prods } else { &table.sums };
    Ok(polys
        .iter()
        .map(|sp| eval_structure(sp, ctx.field(), ctx.m(), &mut cache))
        .collect())
}

pub fn naive_add(a: &WittVector, b: &WittVector) -> Result<WittVector> {
    let ctx = a.context();
    let coords = op_coords(ctx, a.coords(), b.coords(), false)?;
    WittVector::from_coords(ctx.clone(), coords)
}

pub fn naive_mul(a: &WittVector, b: &WittVector) -> Result<WittVector> {
    let ctx = a.context();
    let coords = op_coords(ctx, a.coords(), b.coords(), true)?;
    WittVector::from_coords(ctx.clone(), coords)
}

/// Additive inverse, digit by digit: S_i = X_i + Y_i + g(lower indices),
/// so with x_0..x_{i-1} already fixed and x_i = 0, evaluating S_i at
/// (b, x) yields exactly the term x_i must cancel.
pub fn naive_neg(b: &WittVector) -> Result<WittVector> {
    let ctx = b.context();
    let n = ctx.n() as usize;
    let table = get_table(ctx.p(), ctx.n(), TableKind::ModP)?;
    let mut x: Vec<Poly<FqField>> = (0..n)
        .map(|_| Poly::zero(ctx.field().clone(), ctx.m()))
        .collect();
    for i in 0..n {
        let args: Vec<Poly<FqField>> = b.coords().iter().chain(x.iter()).cloned().collect();
        let mut cache = PowerCache::new(&args);
        let s = eval_structure(&table.sums[i], ctx.field(), ctx.m(), &mut cache);
        x[i] = s.neg();
    }
    WittVector::from_coords(ctx.clone(), x)
}

pub fn naive_sub(a: &WittVector, b: &WittVector) -> Result<WittVector> {
    naive_add(a, &naive_neg(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Pow;
    use rand::Rng;
    use rand::SeedableRng;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn eval_ints(p: &Poly<IntegerRing>, vals: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (exps, c) in p.terms() {
            let mut t = c.clone();
            for (v, &e) in exps.iter().enumerate() {
                t *= vals[v].clone().pow(e);
            }
            acc += t;
        }
        acc
    }

    fn ghost_num(p: &BigUint, i: u32, w: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for l in 0..=i {
            let e = p_to_u64(p).pow(i - l) as u32;
            acc += BigInt::from(p.pow(l)) * w[l as usize].clone().pow(e);
        }
        acc
    }

    #[test]
    fn base_level_polynomials() {
        let table = build_table(&BigUint::from(2u32), 1, TableKind::Integers).unwrap();
        // S_0 = X0 + Y0, P_0 = X0*Y0
        assert_eq!(table.sum_poly(0).coefficient(&[1, 0]), big(1));
        assert_eq!(table.sum_poly(0).coefficient(&[0, 1]), big(1));
        assert_eq!(table.sum_monomials(0), 2);
        assert_eq!(table.prod_poly(0).coefficient(&[1, 1]), big(1));
        assert_eq!(table.prod_monomials(0), 1);
    }

    #[test]
    fn level_one_polynomials_p2() {
        let table = build_table(&BigUint::from(2u32), 2, TableKind::Integers).unwrap();
        // vars: X0 X1 Y0 Y1
        // S_1 = X1 + Y1 - X0*Y0
        let s1 = table.sum_poly(1);
        assert_eq!(s1.coefficient(&[0, 1, 0, 0]), big(1));
        assert_eq!(s1.coefficient(&[0, 0, 0, 1]), big(1));
        assert_eq!(s1.coefficient(&[1, 0, 1, 0]), big(-1));
        assert_eq!(table.sum_monomials(1), 3);
        // P_1 = X0^2*Y1 + X1*Y0^2 + 2*X1*Y1
        let p1 = table.prod_poly(1);
        assert_eq!(p1.coefficient(&[2, 0, 0, 1]), big(1));
        assert_eq!(p1.coefficient(&[0, 1, 2, 0]), big(1));
        assert_eq!(p1.coefficient(&[0, 1, 0, 1]), big(2));
        assert_eq!(p1.num_terms(), 3);
    }

    #[test]
    fn ghost_compatibility_at_random_points() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for p_small in [2u32, 3] {
            let p = BigUint::from(p_small);
            let n = 3u32;
            let table = build_table(&p, n, TableKind::Integers).unwrap();
            for _ in 0..20 {
                let vals: Vec<BigInt> =
                    (0..2 * n).map(|_| big(rng.gen_range(-50..=50))).collect();
                let xs = &vals[..n as usize];
                let ys = &vals[n as usize..];
                for i in 0..n {
                    let s: Vec<BigInt> = (0..=i)
                        .map(|l| eval_ints(table.sum_poly(l as usize), &vals))
                        .collect();
                    let pr: Vec<BigInt> = (0..=i)
                        .map(|l| eval_ints(table.prod_poly(l as usize), &vals))
                        .collect();
                    let gx = ghost_num(&p, i, xs);
                    let gy = ghost_num(&p, i, ys);
                    assert_eq!(ghost_num(&p, i, &s), &gx + &gy);
                    assert_eq!(ghost_num(&p, i, &pr), &gx * &gy);
                }
            }
        }
    }

    #[test]
    fn modp_table_matches_integer_table_reduced() {
        for p_small in [2u32, 3, 5] {
            let p = BigUint::from(p_small);
            let pi = BigInt::from(p.clone());
            let full = build_table(&p, 3, TableKind::Integers).unwrap();
            let modp = build_table(&p, 3, TableKind::ModP).unwrap();
            for i in 0..3 {
                for (which, a, b) in [
                    ("S", full.sum_poly(i), modp.sum_poly(i)),
                    ("P", full.prod_poly(i), modp.prod_poly(i)),
                ] {
                    for (exps, c) in a.terms() {
                        let red = c.mod_floor(&pi);
                        assert_eq!(
                            b.coefficient(exps),
                            red,
                            "{}_{} mismatch at {:?}",
                            which,
                            i,
                            exps
                        );
                    }
                    let nonzero = a
                        .terms()
                        .filter(|(_, c)| !c.mod_floor(&pi).is_zero())
                        .count();
                    assert_eq!(b.num_terms(), nonzero);
                }
            }
        }
    }

    #[test]
    fn export_lines_shape() {
        let table = build_table(&BigUint::from(2u32), 2, TableKind::Integers).unwrap();
        let text = table.export_lines();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "X0 + Y0");
        assert_eq!(lines[2], "X0*Y0");
    }
}
