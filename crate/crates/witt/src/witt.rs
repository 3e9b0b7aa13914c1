//! Truncated p-typical Witt vectors over F_q[X_1..X_m] and the two fast
//! backends: the Illusie-isomorphism lift and the ghost-components method.
//! The classical construction lives in `naive` and serves as the oracle.

use num_bigint::{BigUint, RandBigInt};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::fq::FqField;
use crate::gr::GaloisRing;
use crate::naive;
use crate::poly::{lift_poly, monomial_p_valuation, project_poly, Poly};

/// Shared parameters of W_n(F_q[X_1..X_m]): the residue field, the Galois
/// ring GR(p^n,d) model of W_n(F_q), and the variable count m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittContext {
    field: FqField,
    ring: GaloisRing,
    m: usize,
}

impl WittContext {
    pub fn new(p: BigUint, d: usize, n: u32, m: usize) -> Result<Self> {
        let field = FqField::new(p, d)?;
        let ring = GaloisRing::new(field.clone(), n)?;
        Ok(WittContext { field, ring, m })
    }

    pub fn with_field(field: FqField, n: u32, m: usize) -> Result<Self> {
        let ring = GaloisRing::new(field.clone(), n)?;
        Ok(WittContext { field, ring, m })
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn galois_ring(&self) -> &GaloisRing {
        &self.ring
    }

    pub fn p(&self) -> &BigUint {
        self.field.p()
    }

    pub fn n(&self) -> u32 {
        self.ring.n()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    fn p_u64(&self) -> u64 {
        u64::try_from(self.p()).expect("p too large for power towers")
    }

    /// p^k as a u64 exponent for the power towers in both algorithms.
    fn pk(&self, k: u32) -> u64 {
        self.p_u64()
            .checked_pow(k)
            .expect("p^k exponent overflow")
    }

    /// p^k as a scalar of the Galois ring.
    fn pk_scalar(&self, k: u32) -> crate::gr::GrElement {
        self.ring.from_natural(self.p().pow(k))
    }
}

/// Which algorithm computes the ring laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Classical Witt structure polynomials, evaluated directly.
    Naive,
    /// Single lifted polynomial via the degree-(n-1) ghost map.
    Illusie,
    /// All n ghost components, componentwise operation, then inversion.
    Phantom,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Naive, Backend::Illusie, Backend::Phantom];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Naive => "naive",
            Backend::Illusie => "illusie",
            Backend::Phantom => "phantom",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Backend::Naive),
            "illusie" => Ok(Backend::Illusie),
            "phantom" => Ok(Backend::Phantom),
            other => Err(Error::InvalidParameter(format!(
                "unknown backend '{}' (expected naive, illusie or phantom)",
                other
            ))),
        }
    }
}

/// An element of W_n(F_q[X_1..X_m]): n coordinate polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittVector {
    ctx: WittContext,
    coords: Vec<Poly<FqField>>,
}

/// The n first ghost components of a Witt vector, in GR(p^n,d)[X].
/// Component j is only contractually meaningful mod p^{j+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhostTuple {
    ctx: WittContext,
    comps: Vec<Poly<GaloisRing>>,
}

impl GhostTuple {
    pub fn context(&self) -> &WittContext {
        &self.ctx
    }

    pub fn components(&self) -> &[Poly<GaloisRing>] {
        &self.comps
    }

    pub fn from_components(ctx: WittContext, comps: Vec<Poly<GaloisRing>>) -> Result<Self> {
        if comps.len() != ctx.n() as usize {
            return Err(Error::ContextMismatch(format!(
                "expected {} ghost components, got {}",
                ctx.n(),
                comps.len()
            )));
        }
        for c in &comps {
            if c.ring() != ctx.galois_ring() || c.nvars() != ctx.m() {
                return Err(Error::ContextMismatch(
                    "ghost component has wrong ring or arity".into(),
                ));
            }
        }
        Ok(GhostTuple { ctx, comps })
    }
}

impl WittVector {
    pub fn from_coords(ctx: WittContext, coords: Vec<Poly<FqField>>) -> Result<Self> {
        if coords.len() != ctx.n() as usize {
            return Err(Error::ContextMismatch(format!(
                "expected {} coordinates, got {}",
                ctx.n(),
                coords.len()
            )));
        }
        for c in &coords {
            if c.ring() != ctx.field() || c.nvars() != ctx.m() {
                return Err(Error::ContextMismatch(
                    "coordinate has wrong field or arity".into(),
                ));
            }
        }
        Ok(WittVector { ctx, coords })
    }

    pub fn context(&self) -> &WittContext {
        &self.ctx
    }

    pub fn coords(&self) -> &[Poly<FqField>] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

pub fn witt_zero(ctx: &WittContext) -> WittVector {
    let coords = (0..ctx.n())
        .map(|_| Poly::zero(ctx.field().clone(), ctx.m()))
        .collect();
    WittVector {
        ctx: ctx.clone(),
        coords,
    }
}

pub fn witt_one(ctx: &WittContext) -> WittVector {
    teichmueller(ctx, &Poly::one(ctx.field().clone(), ctx.m()))
}

/// The multiplicative representative (P, 0, ..., 0).
pub fn teichmueller(ctx: &WittContext, p: &Poly<FqField>) -> WittVector {
    assert!(p.ring() == ctx.field() && p.nvars() == ctx.m());
    let mut coords = vec![p.clone()];
    for _ in 1..ctx.n() {
        coords.push(Poly::zero(ctx.field().clone(), ctx.m()));
    }
    WittVector {
        ctx: ctx.clone(),
        coords,
    }
}

/// V^r: shift in r leading zero coordinates, truncating at length n.
pub fn verschiebung(w: &WittVector, r: u32) -> WittVector {
    let n = w.ctx.n() as usize;
    let r = (r as usize).min(n);
    let mut coords = Vec::with_capacity(n);
    for _ in 0..r {
        coords.push(Poly::zero(w.ctx.field().clone(), w.ctx.m()));
    }
    coords.extend(w.coords[..n - r].iter().cloned());
    WittVector {
        ctx: w.ctx.clone(),
        coords,
    }
}

/// F^r: coordinatewise p^r-th power; a ring endomorphism because the
/// coefficient ring has characteristic p.
pub fn witt_frobenius(w: &WittVector, r: u32) -> WittVector {
    let coords = w.coords.iter().map(|c| c.frobenius(r)).collect();
    WittVector {
        ctx: w.ctx.clone(),
        coords,
    }
}

/// All n ghost components: component j is sum_{i<=j} p^i lift(w_i)^{p^{j-i}}.
pub fn ghost_components(w: &WittVector) -> GhostTuple {
    let ctx = &w.ctx;
    let n = ctx.n() as usize;
    let gr = ctx.galois_ring();
    let mut comps: Vec<Poly<GaloisRing>> = (0..n)
        .map(|_| Poly::zero(gr.clone(), ctx.m()))
        .collect();
    for (i, coord) in w.coords.iter().enumerate() {
        let scalar = ctx.pk_scalar(i as u32);
        let mut power = lift_poly(coord, gr);
        for (j, comp) in comps.iter_mut().enumerate().take(n).skip(i) {
            *comp = comp.add(&power.scale(&scalar));
            if j + 1 < n {
                power = power.pow(ctx.p_u64());
            }
        }
    }
    GhostTuple {
        ctx: ctx.clone(),
        comps,
    }
}

/// Recovers the Witt vector whose ghost components agree with T at the
/// meaningful precision. T must arise from componentwise sums/products of
/// genuine ghost tuples, otherwise the exact divisions fail.
pub fn ghost_inverse(t: &GhostTuple) -> Result<WittVector> {
    let ctx = &t.ctx;
    let n = ctx.n() as usize;
    let gr = ctx.galois_ring();
    let mut coords: Vec<Poly<FqField>> = Vec::with_capacity(n);
    // powers[i] tracks lift(R_i)^{p^{j-i}} as j advances.
    let mut powers: Vec<Poly<GaloisRing>> = Vec::with_capacity(n);
    for j in 0..n {
        for power in powers.iter_mut() {
            *power = power.pow(ctx.p_u64());
        }
        let mut acc = t.comps[j].clone();
        for (i, power) in powers.iter().enumerate() {
            acc = acc.sub(&power.scale(&ctx.pk_scalar(i as u32)));
        }
        let divided = acc.exact_div_p(j as u32)?;
        let r_j = project_poly(&divided);
        powers.push(lift_poly(&r_j, gr));
        coords.push(r_j);
    }
    Ok(WittVector {
        ctx: ctx.clone(),
        coords,
    })
}

/// The injective map F~^{n-1} into GR(p^n,d)[X]:
/// sum_{i} p^i lift(w_i)^{p^{n-1-i}}. Equals ghost component n-1.
pub fn illusie_lift(w: &WittVector) -> Poly<GaloisRing> {
    let ctx = &w.ctx;
    let n = ctx.n();
    let gr = ctx.galois_ring();
    let mut acc = Poly::zero(gr.clone(), ctx.m());
    for (i, coord) in w.coords.iter().enumerate() {
        let lifted = lift_poly(coord, gr);
        let power = lifted.pow(ctx.pk(n - 1 - i as u32));
        acc = acc.add(&power.scale(&ctx.pk_scalar(i as u32)));
    }
    acc
}

/// Inverts `illusie_lift` on its image: peel coordinate i as the
/// Frob^{n-1-i} preimage of the projection, subtract its lift power,
/// divide by p, repeat.
pub fn illusie_unlift(ctx: &WittContext, p: &Poly<GaloisRing>) -> Result<WittVector> {
    if p.ring() != ctx.galois_ring() || p.nvars() != ctx.m() {
        return Err(Error::ContextMismatch(
            "polynomial does not match the Witt context".into(),
        ));
    }
    let n = ctx.n();
    let mut rest = p.clone();
    let mut coords = Vec::with_capacity(n as usize);
    for i in 0..n {
        let k = n - 1 - i;
        let r_i = project_poly(&rest).inv_frobenius(k)?;
        if i + 1 < n {
            let lifted = lift_poly(&r_i, ctx.galois_ring());
            rest = rest.sub(&lifted.pow(ctx.pk(k))).exact_div_p(1)?;
        }
        coords.push(r_i);
    }
    Ok(WittVector {
        ctx: ctx.clone(),
        coords,
    })
}

/// True iff every coefficient of P is digitwise divisible by
/// p^{n-1-v_{p,m}(u)}, the image characterization of the Illusie map over a
/// perfect base field.
pub fn is_in_illusie_image(p: &Poly<GaloisRing>) -> bool {
    let gr = p.ring();
    let n = gr.n();
    let prime = gr.p();
    for (exps, coeff) in p.terms() {
        let v = monomial_p_valuation(exps, prime, n - 1);
        let req = n - 1 - v;
        if req == 0 {
            continue;
        }
        let pr = prime.pow(req);
        if coeff.coeffs().iter().any(|c| !(c % &pr).is_zero()) {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RingOp {
    Add,
    Sub,
    Mul,
}

fn check_same_context(a: &WittVector, b: &WittVector) -> Result<()> {
    if a.ctx != b.ctx {
        return Err(Error::ContextMismatch(
            "Witt vectors live in different contexts".into(),
        ));
    }
    Ok(())
}

fn illusie_op(a: &WittVector, b: &WittVector, op: RingOp) -> Result<WittVector> {
    let ga = illusie_lift(a);
    let gb = illusie_lift(b);
    let combined = match op {
        RingOp::Add => ga.add(&gb),
        RingOp::Sub => ga.sub(&gb),
        RingOp::Mul => ga.mul(&gb),
    };
    illusie_unlift(&a.ctx, &combined)
}

fn phantom_op(a: &WittVector, b: &WittVector, op: RingOp) -> Result<WittVector> {
    let ga = ghost_components(a);
    let gb = ghost_components(b);
    let comps: Vec<Poly<GaloisRing>> = ga
        .comps
        .iter()
        .zip(&gb.comps)
        .map(|(x, y)| match op {
            RingOp::Add => x.add(y),
            RingOp::Sub => x.sub(y),
            RingOp::Mul => x.mul(y),
        })
        .collect();
    ghost_inverse(&GhostTuple {
        ctx: a.ctx.clone(),
        comps,
    })
}

fn witt_op(a: &WittVector, b: &WittVector, backend: Backend, op: RingOp) -> Result<WittVector> {
    check_same_context(a, b)?;
    match backend {
        Backend::Illusie => illusie_op(a, b, op),
        Backend::Phantom => phantom_op(a, b, op),
        Backend::Naive => match op {
            RingOp::Add => naive::naive_add(a, b),
            RingOp::Sub => naive::naive_sub(a, b),
            RingOp::Mul => naive::naive_mul(a, b),
        },
    }
}

pub fn witt_add(a: &WittVector, b: &WittVector, backend: Backend) -> Result<WittVector> {
    witt_op(a, b, backend, RingOp::Add)
}

pub fn witt_sub(a: &WittVector, b: &WittVector, backend: Backend) -> Result<WittVector> {
    witt_op(a, b, backend, RingOp::Sub)
}

pub fn witt_mul(a: &WittVector, b: &WittVector, backend: Backend) -> Result<WittVector> {
    witt_op(a, b, backend, RingOp::Mul)
}

/// Additive inverse. Computed as 0 - a; coordinatewise negation is wrong
/// for p = 2.
pub fn witt_neg(a: &WittVector, backend: Backend) -> Result<WittVector> {
    witt_sub(&witt_zero(&a.ctx), a, backend)
}

/// How `random_witt` bounds coordinate degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    PerVariable,
    Total,
}

impl std::str::FromStr for BoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-var" => Ok(BoundKind::PerVariable),
            "total" => Ok(BoundKind::Total),
            other => Err(Error::InvalidParameter(format!(
                "unknown degree bound kind '{}' (expected per-var or total)",
                other
            ))),
        }
    }
}

/// All exponent vectors of length m within the bound, in ascending
/// graded-lex order (deterministic, so seeded draws are reproducible).
pub fn monomials_within(m: usize, bound: u32, kind: BoundKind) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; m];
    fn rec(
        out: &mut Vec<Vec<u32>>,
        current: &mut Vec<u32>,
        idx: usize,
        bound: u32,
        used: u32,
        kind: BoundKind,
    ) {
        if idx == current.len() {
            out.push(current.clone());
            return;
        }
        let max = match kind {
            BoundKind::PerVariable => bound,
            BoundKind::Total => bound - used,
        };
        for e in 0..=max {
            current[idx] = e;
            rec(
                out,
                current,
                idx + 1,
                bound,
                used + if kind == BoundKind::Total { e } else { 0 },
                kind,
            );
        }
        current[idx] = 0;
    }
    if m == 0 {
        out.push(Vec::new());
        return out;
    }
    rec(&mut out, &mut current, 0, bound, 0, kind);
    out.sort_by(|a, b| crate::poly::grlex_cmp(a, b));
    out
}

/// A seeded random Witt vector: every coordinate carries every monomial
/// within the bound, coefficients uniform over F_q. Same seed, same output.
pub fn random_witt(
    ctx: &WittContext,
    degree_bound: u32,
    kind: BoundKind,
    seed: u64,
) -> WittVector {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    random_witt_with(ctx, degree_bound, kind, &mut rng)
}

pub fn random_witt_with<R: rand::Rng>(
    ctx: &WittContext,
    degree_bound: u32,
    kind: BoundKind,
    rng: &mut R,
) -> WittVector {
    let field = ctx.field().clone();
    let monomials = monomials_within(ctx.m(), degree_bound, kind);
    let d = field.degree();
    let p = field.p().clone();
    let coords = (0..ctx.n())
        .map(|_| {
            let terms = monomials.iter().map(|mono| {
                let digits: Vec<BigUint> =
                    (0..d).map(|_| rng.gen_biguint_below(&p)).collect();
                (mono.clone(), field.from_coeffs(&digits))
            });
            Poly::from_terms(field.clone(), ctx.m(), terms)
        })
        .collect();
    WittVector {
        ctx: ctx.clone(),
        coords,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_poly;
    use crate::textio::{parse_witt, print_witt};

    fn ctx(p: u32, d: usize, n: u32, m: usize) -> WittContext {
        WittContext::new(BigUint::from(p), d, n, m).unwrap()
    }

    fn fq_poly(c: &WittContext, src: &str) -> Poly<FqField> {
        parse_poly(src, c.field().clone(), c.m()).unwrap()
    }

    fn gr_poly(c: &WittContext, src: &str) -> Poly<GaloisRing> {
        parse_poly(src, c.galois_ring().clone(), c.m()).unwrap()
    }

    fn wv(c: &WittContext, coords: &[&str]) -> WittVector {
        let coords = coords.iter().map(|s| fq_poly(c, s)).collect();
        WittVector::from_coords(c.clone(), coords).unwrap()
    }

    #[test]
    fn teichmueller_sum_p2() {
        let c = ctx(2, 1, 2, 1);
        let x = teichmueller(&c, &fq_poly(&c, "X1"));
        let expected = wv(&c, &["0", "X1^2"]);
        for backend in Backend::ALL {
            assert_eq!(witt_add(&x, &x, backend).unwrap(), expected, "{:?}", backend);
        }
    }

    #[test]
    fn ghost_components_example() {
        let c = ctx(2, 1, 2, 1);
        let w = wv(&c, &["X1", "0"]);
        let g = ghost_components(&w);
        assert_eq!(g.components()[0], gr_poly(&c, "X1"));
        assert_eq!(g.components()[1], gr_poly(&c, "X1^2"));
    }

    #[test]
    fn illusie_lift_example_and_roundtrip() {
        let c = ctx(2, 1, 2, 1);
        let w = wv(&c, &["X1", "1"]);
        let lifted = illusie_lift(&w);
        assert_eq!(lifted, gr_poly(&c, "X1^2 + 2"));
        assert!(is_in_illusie_image(&lifted));
        assert_eq!(illusie_unlift(&c, &lifted).unwrap(), w);
    }

    #[test]
    fn ghost_inverse_example() {
        let c = ctx(2, 1, 2, 1);
        let t = GhostTuple::from_components(
            c.clone(),
            vec![gr_poly(&c, "2*X1"), gr_poly(&c, "2*X1^2")],
        )
        .unwrap();
        assert_eq!(ghost_inverse(&t).unwrap(), wv(&c, &["0", "X1^2"]));
    }

    #[test]
    fn negation_of_one_p2() {
        let c = ctx(2, 1, 2, 1);
        let one = witt_one(&c);
        let expected = wv(&c, &["1", "1"]);
        for backend in Backend::ALL {
            let neg = witt_neg(&one, backend).unwrap();
            assert_eq!(neg, expected, "{:?}", backend);
            assert!(witt_add(&one, &neg, backend).unwrap().is_zero());
        }
    }

    #[test]
    fn backends_agree() {
        for (p, d, n, m) in [(2u32, 1, 3, 1), (3, 2, 3, 2), (5, 1, 2, 1)] {
            let c = ctx(p, d, n, m);
            let a = random_witt(&c, 1, BoundKind::Total, 11);
            let b = random_witt(&c, 1, BoundKind::Total, 22);
            for op in [witt_add, witt_sub, witt_mul] {
                let reference = op(&a, &b, Backend::Naive).unwrap();
                assert_eq!(op(&a, &b, Backend::Illusie).unwrap(), reference);
                assert_eq!(op(&a, &b, Backend::Phantom).unwrap(), reference);
            }
        }
    }

    #[test]
    fn ring_laws() {
        let c = ctx(3, 1, 3, 1);
        let a = random_witt(&c, 2, BoundKind::Total, 1);
        let b = random_witt(&c, 2, BoundKind::Total, 2);
        let cc = random_witt(&c, 2, BoundKind::Total, 3);
        let backend = Backend::Illusie;
        let add = |x: &WittVector, y: &WittVector| witt_add(x, y, backend).unwrap();
        let mul = |x: &WittVector, y: &WittVector| witt_mul(x, y, backend).unwrap();
        assert_eq!(add(&a, &b), add(&b, &a));
        assert_eq!(mul(&a, &b), mul(&b, &a));
        assert_eq!(add(&add(&a, &b), &cc), add(&a, &add(&b, &cc)));
        assert_eq!(mul(&mul(&a, &b), &cc), mul(&a, &mul(&b, &cc)));
        assert_eq!(mul(&a, &add(&b, &cc)), add(&mul(&a, &b), &mul(&a, &cc)));
        assert_eq!(add(&a, &witt_zero(&c)), a);
        assert_eq!(mul(&a, &witt_one(&c)), a);
        assert!(witt_sub(&a, &a, backend).unwrap().is_zero());
    }

    #[test]
    fn frobenius_verschiebung_identity() {
        // F(V(w)) = p·w, i.e. the p-fold sum of w.
        for p in [2u32, 3] {
            let c = ctx(p, 1, 3, 1);
            let w = random_witt(&c, 2, BoundKind::Total, 5);
            let fv = witt_frobenius(&verschiebung(&w, 1), 1);
            let mut sum = witt_zero(&c);
            for _ in 0..p {
                sum = witt_add(&sum, &w, Backend::Illusie).unwrap();
            }
            assert_eq!(fv, sum);
        }
    }

    #[test]
    fn teichmueller_is_multiplicative() {
        let c = ctx(3, 2, 3, 2);
        let a = fq_poly(&c, "X1 + t");
        let b = fq_poly(&c, "X2^2 + 2");
        let lhs = witt_mul(
            &teichmueller(&c, &a),
            &teichmueller(&c, &b),
            Backend::Phantom,
        )
        .unwrap();
        assert_eq!(lhs, teichmueller(&c, &a.mul(&b)));
    }

    #[test]
    fn image_membership() {
        let c = ctx(3, 1, 3, 1);
        let w = random_witt(&c, 2, BoundKind::Total, 9);
        assert!(is_in_illusie_image(&illusie_lift(&w)));
        // X1 has a unit coefficient on a monomial of valuation 0; it would
        // need divisibility by p^2.
        assert!(!is_in_illusie_image(&gr_poly(&c, "X1")));
        // 3*X1^3 has valuation 1, needs p^1: member candidate.
        assert!(is_in_illusie_image(&gr_poly(&c, "3*X1^3 + 9*X1")));
        assert!(!is_in_illusie_image(&gr_poly(&c, "3*X1")));
    }

    #[test]
    fn text_format_roundtrip_and_shape() {
        let c = ctx(2, 1, 2, 1);
        let w = wv(&c, &["X1", "X1 + 1"]);
        let text = print_witt(&w);
        assert_eq!(text, "witt p=2 d=1 n=2 m=1 f=t\nX1\nX1 + 1\n");
        assert_eq!(parse_witt(&text).unwrap(), w);

        let c2 = ctx(3, 2, 3, 2);
        let w2 = random_witt(&c2, 2, BoundKind::PerVariable, 1234);
        assert_eq!(parse_witt(&print_witt(&w2)).unwrap(), w2);
    }

    #[test]
    fn text_format_errors() {
        assert!(parse_witt("").is_err());
        assert!(parse_witt("witt p=4 d=1 n=2 m=1 f=t\n0\n0\n").is_err());
        assert!(parse_witt("witt p=2 d=1 n=2 m=1 f=t\n0\n").is_err());
        assert!(parse_witt("witt p=2 d=1 n=2 m=1 f=t\n0\n0\nextra\n").is_err());
        assert!(parse_witt("witt p=2 d=2 n=1 m=1 f=t\n0\n").is_err());
    }

    #[test]
    fn random_witt_determinism_and_degrees() {
        let c = ctx(5, 2, 2, 2);
        let a = random_witt(&c, 3, BoundKind::Total, 42);
        assert_eq!(a, random_witt(&c, 3, BoundKind::Total, 42));
        assert_ne!(a, random_witt(&c, 3, BoundKind::Total, 43));
        for coord in a.coords() {
            assert!(coord.total_degree().unwrap_or(0) <= 3);
        }
        let b = random_witt(&c, 2, BoundKind::PerVariable, 42);
        for coord in b.coords() {
            for (exps, _) in coord.terms() {
                assert!(exps.iter().all(|&e| e <= 2));
            }
        }
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_within(2, 1, BoundKind::Total).len(), 3);
        assert_eq!(monomials_within(2, 1, BoundKind::PerVariable).len(), 4);
        assert_eq!(monomials_within(2, 2, BoundKind::Total).len(), 6);
        assert_eq!(monomials_within(0, 4, BoundKind::Total), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn context_mismatch_is_rejected() {
        let c1 = ctx(2, 1, 2, 1);
        let c2 = ctx(3, 1, 2, 1);
        let a = witt_one(&c1);
        let b = witt_one(&c2);
        assert!(matches!(
            witt_add(&a, &b, Backend::Illusie),
            Err(Error::ContextMismatch(_))
        ));
    }
}
