//! Arithmetic in the Galois ring GR(p^n, d) = (Z/p^n)[t]/(f~), the concrete
//! model of W_n(F_q) in which the lifted computations happen.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fq::{FqElement, FqField};

#[derive(Debug, PartialEq, Eq)]
struct RingData {
    field: FqField,
    n: u32,
    pn: BigUint,
    /// Digitwise lift of the field modulus; monic, length d+1, constant first.
    f: Vec<BigUint>,
}

/// GR(p^n, d): the unramified degree-d extension of Z/p^n.
#[derive(Debug, Clone)]
pub struct GaloisRing(Arc<RingData>);

impl PartialEq for GaloisRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for GaloisRing {}

/// An element of GR(p^n, d): d canonical residues in [0, p^n).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrElement {
    coeffs: Vec<BigUint>,
}

impl GrElement {
    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }
}

impl GaloisRing {
    /// Builds GR(p^n, d) over the given residue field, with the digitwise
    /// lift of its defining polynomial as modulus.
    pub fn new(field: FqField, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "truncation length must be >= 1".into(),
            ));
        }
        let pn = field.p().pow(n);
        let f = field.modulus().to_vec();
        Ok(GaloisRing(Arc::new(RingData { field, n, pn, f })))
    }

    pub fn residue_field(&self) -> &FqField {
        &self.0.field
    }

    pub fn p(&self) -> &BigUint {
        self.0.field.p()
    }

    pub fn n(&self) -> u32 {
        self.0.n
    }

    pub fn degree(&self) -> usize {
        self.0.field.degree()
    }

    /// The working modulus p^n.
    pub fn pn(&self) -> &BigUint {
        &self.0.pn
    }

    pub fn zero(&self) -> GrElement {
        GrElement {
            coeffs: vec![BigUint::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> GrElement {
        self.from_natural(BigUint::one())
    }

    pub fn from_natural(&self, v: BigUint) -> GrElement {
        let mut coeffs = vec![BigUint::zero(); self.degree()];
        coeffs[0] = v % &self.0.pn;
        GrElement { coeffs }
    }

    pub fn from_coeffs(&self, coeffs: &[BigUint]) -> GrElement {
        let reduced: Vec<BigUint> = coeffs.iter().map(|c| c % &self.0.pn).collect();
        let rem = self.rem(&reduced);
        let mut out = vec![BigUint::zero(); self.degree()];
        for (i, c) in rem.into_iter().enumerate() {
            out[i] = c;
        }
        GrElement { coeffs: out }
    }

    pub fn is_zero(&self, x: &GrElement) -> bool {
        x.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, a: &GrElement, b: &GrElement) -> GrElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| {
                let s = x + y;
                if s >= self.0.pn {
                    s - &self.0.pn
                } else {
                    s
                }
            })
            .collect();
        GrElement { coeffs }
    }

    pub fn sub(&self, a: &GrElement, b: &GrElement) -> GrElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| if x >= y { x - y } else { x + &self.0.pn - y })
            .collect();
        GrElement { coeffs }
    }

    pub fn neg(&self, a: &GrElement) -> GrElement {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &GrElement, b: &GrElement) -> GrElement {
        let d = self.degree();
        if d == 1 {
            return GrElement {
                coeffs: vec![&a.coeffs[0] * &b.coeffs[0] % &self.0.pn],
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
            *c = &*c % &self.0.pn;
        }
        let rem = self.rem(&prod);
        let mut out = vec![BigUint::zero(); d];
        for (i, c) in rem.into_iter().enumerate() {
            out[i] = c;
        }
        GrElement { coeffs: out }
    }

    pub fn pow(&self, a: &GrElement, e: &BigUint) -> GrElement {
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

    /// Digitwise reduction mod p: the quotient map GR(p^n,d) -> F_q.
    pub fn reduce(&self, z: &GrElement) -> FqElement {
        self.0.field.from_coeffs(&z.coeffs)
    }

    /// Digitwise lift: each F_p coefficient value v in [0,p) maps to the
    /// residue v in Z/p^n. A section of `reduce`.
    pub fn lift(&self, a: &FqElement) -> GrElement {
        GrElement {
            coeffs: a.coeffs().to_vec(),
        }
    }

    /// Exact division by p^j. Every coefficient must be divisible by p^j in
    /// Z/p^n; the result is only contractually meaningful mod p^{n-j}.
    pub fn exact_div_p(&self, z: &GrElement, j: u32) -> Result<GrElement> {
        if j == 0 {
            return Ok(z.clone());
        }
        let pj = self.p().pow(j);
        let mut coeffs = Vec::with_capacity(z.coeffs.len());
        for c in &z.coeffs {
            if !(c % &pj).is_zero() {
                return Err(Error::NotDivisible { power: j });
            }
            coeffs.push(c / &pj);
        }
        Ok(GrElement { coeffs })
    }

    /// Reduces a raw residue mod p^{n-j}, zeroing the top j base-p digits.
    pub fn truncate_precision(&self, z: &GrElement, j: u32) -> GrElement {
        if j == 0 || j >= self.0.n {
            if j >= self.0.n {
                return self.zero();
            }
            return z.clone();
        }
        let m = self.p().pow(self.0.n - j);
        GrElement {
            coeffs: z.coeffs.iter().map(|c| c % &m).collect(),
        }
    }

    fn rem(&self, a: &[BigUint]) -> Vec<BigUint> {
        let dm = self.degree();
        let mut r: Vec<BigUint> = a.to_vec();
        while r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
        while r.len() > dm {
            let lead = r.last().unwrap().clone();
            let shift = r.len() - 1 - dm;
            if !lead.is_zero() {
                for i in 0..dm {
                    let sub = &lead * &self.0.f[i] % &self.0.pn;
                    let idx = shift + i;
                    r[idx] = if r[idx] >= sub {
                        &r[idx] - sub
                    } else {
                        &r[idx] + &self.0.pn - sub
                    };
                }
            }
            r.pop();
            while r.last().map_or(false, |c| c.is_zero()) {
                r.pop();
            }
        }
        r
    }

    pub fn element_string(&self, x: &GrElement) -> String {
        crate::fq::coeffs_to_string(&x.coeffs)
    }
}

impl fmt::Display for GrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::fq::coeffs_to_string(&self.coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn ring(p: u64, d: usize, n: u32) -> GaloisRing {
        GaloisRing::new(FqField::new(big(p), d).unwrap(), n).unwrap()
    }

    #[test]
    fn z4_power() {
        // In GR(4,1) = Z/4: 3^2 = 1.
        let r = ring(2, 1, 2);
        let three = r.from_natural(big(3));
        assert_eq!(r.pow(&three, &big(2)), r.one());
        assert_eq!(r.pow(&three, &big(0)), r.one());
    }

    #[test]
    fn reduce_examples() {
        // In GR(9,1): 7 mod 3 = 1.
        let r = ring(3, 1, 2);
        let k = r.residue_field().clone();
        assert_eq!(r.reduce(&r.from_natural(big(7))), k.from_natural(big(1)));
        assert_eq!(r.reduce(&r.zero()), k.zero());
    }

    #[test]
    fn lift_is_section() {
        let r = ring(3, 1, 3);
        let k = r.residue_field().clone();
        for v in 0..3 {
            let a = k.from_natural(big(v));
            assert_eq!(r.reduce(&r.lift(&a)), a);
            assert_eq!(r.lift(&a).coeffs()[0], big(v));
        }
        // In F_4 -> GR(8,2): lift(t+1) = t+1.
        let r = ring(2, 2, 3);
        let k = r.residue_field().clone();
        let a = k.add(&k.generator(), &k.one());
        let z = r.lift(&a);
        assert_eq!(z.coeffs(), &[big(1), big(1)]);
        assert_eq!(r.reduce(&z), a);
    }

    #[test]
    fn exact_division() {
        let r = ring(2, 1, 3);
        assert_eq!(r.exact_div_p(&r.zero(), 2).unwrap(), r.zero());
        // In Z/8: 6/2 = 3.
        assert_eq!(
            r.exact_div_p(&r.from_natural(big(6)), 1).unwrap(),
            r.from_natural(big(3))
        );
        assert_eq!(
            r.exact_div_p(&r.from_natural(big(5)), 1),
            Err(Error::NotDivisible { power: 1 })
        );
    }

    #[test]
    fn division_inverts_multiplication_mod_lower_precision() {
        let r = ring(3, 2, 3);
        let mut z = r.from_coeffs(&[big(5), big(17)]);
        for j in 1..3u32 {
            z = r.mul(&z, &r.from_coeffs(&[big(7), big(2)]));
            let pj = r.from_natural(r.p().pow(j));
            let back = r.exact_div_p(&r.mul(&pj, &z), j).unwrap();
            assert_eq!(
                r.truncate_precision(&back, j),
                r.truncate_precision(&z, j)
            );
        }
    }

    #[test]
    fn reduce_is_ring_homomorphism() {
        let r = ring(2, 2, 3);
        let k = r.residue_field().clone();
        let mut x = r.from_coeffs(&[big(3), big(5)]);
        let mut y = r.from_coeffs(&[big(6), big(1)]);
        for _ in 0..20 {
            x = r.add(&r.mul(&x, &y), &r.one());
            y = r.mul(&y, &y);
            assert_eq!(r.reduce(&r.add(&x, &y)), k.add(&r.reduce(&x), &r.reduce(&y)));
            assert_eq!(r.reduce(&r.mul(&x, &y)), k.mul(&r.reduce(&x), &r.reduce(&y)));
        }
    }

    #[test]
    fn reduce_lift_identity_exhaustive_small() {
        // Exhaustive for q <= 25.
        for (p, d) in [(2u64, 2usize), (3, 1), (5, 2)] {
            let r = ring(p, d, 3);
            let k = r.residue_field().clone();
            let mut digits = vec![0u64; d];
            loop {
                let a = k.from_coeffs(&digits.iter().map(|&v| big(v)).collect::<Vec<_>>());
                assert_eq!(r.reduce(&r.lift(&a)), a);
                let mut i = 0;
                loop {
                    if i == d {
                        return;
                    }
                    digits[i] += 1;
                    if digits[i] < p {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
            }
        }
    }
}
