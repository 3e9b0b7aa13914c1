//! Fixed-width multiplication kernel. When the coefficient modulus fits a
//! machine word, products run over u64 arrays instead of heap integers, and
//! switch to a dense accumulation grid when the result support is near-dense.
//! The generic path in `Poly::mul_generic` stays as the reference
//! implementation; the two are cross-checked by property tests.

use super::{CoeffRing, Poly, TermMap};

const DENSE_WORD_LIMIT: usize = 1 << 23;

/// Modular model of a coefficient ring whose working modulus fits u64:
/// elements are d words, reduction by a monic degree-d polynomial.
#[derive(Debug, Clone)]
pub struct U64Model {
    modulus: u64,
    d: usize,
    /// Negated low coefficients of the reduction polynomial:
    /// t^d = neg_red[0] + neg_red[1] t + ... mod modulus.
    neg_red: Vec<u64>,
}

impl U64Model {
    pub fn new(modulus: u64, d: usize, red: Vec<u64>) -> Self {
        assert!(modulus > 1 && modulus < (1 << 63));
        assert_eq!(red.len(), d);
        let neg_red = red
            .iter()
            .map(|&c| if c == 0 { 0 } else { modulus - c % modulus })
            .collect();
        U64Model {
            modulus,
            d,
            neg_red,
        }
    }

    #[inline]
    fn small(&self) -> bool {
        self.modulus <= u32::MAX as u64
    }

    #[inline]
    fn mul_mod(&self, a: u64, b: u64) -> u64 {
        if self.small() {
            (a * b) % self.modulus
        } else {
            ((a as u128 * b as u128) % self.modulus as u128) as u64
        }
    }

    #[inline]
    fn add_assign_mod(&self, acc: &mut u64, v: u64) {
        let s = *acc + v;
        *acc = if s >= self.modulus { s - self.modulus } else { s };
    }

    /// acc[..d] += a * b in the quotient ring, using scratch[..2d-1].
    #[inline]
    fn mul_acc(&self, acc: &mut [u64], a: &[u64], b: &[u64], scratch: &mut [u64]) {
        let d = self.d;
        if d == 1 {
            self.add_assign_mod(&mut acc[0], self.mul_mod(a[0], b[0]));
            return;
        }
        scratch[..2 * d - 1].fill(0);
        for i in 0..d {
            if a[i] == 0 {
                continue;
            }
            for j in 0..d {
                if b[j] == 0 {
                    continue;
                }
                let v = self.mul_mod(a[i], b[j]);
                self.add_assign_mod(&mut scratch[i + j], v);
            }
        }
        // Fold t^k for k >= d back down using t^d = neg_red.
        for k in (d..2 * d - 1).rev() {
            let c = scratch[k];
            if c == 0 {
                continue;
            }
            scratch[k] = 0;
            for i in 0..d {
                if self.neg_red[i] == 0 {
                    continue;
                }
                let v = self.mul_mod(c, self.neg_red[i]);
                self.add_assign_mod(&mut scratch[k - d + i], v);
            }
        }
        for i in 0..d {
            self.add_assign_mod(&mut acc[i], scratch[i]);
        }
    }
}

struct WordTerms {
    exps: Vec<Vec<u32>>,
    coeffs: Vec<u64>, // flattened, stride d
}

fn extract<R: CoeffRing>(p: &Poly<R>, d: usize) -> WordTerms {
    let mut exps = Vec::with_capacity(p.num_terms());
    let mut coeffs = Vec::with_capacity(p.num_terms() * d);
    for (e, c) in p.terms() {
        exps.push(e.clone());
        let w = p.ring().elem_to_words(c);
        debug_assert_eq!(w.len(), d);
        coeffs.extend_from_slice(&w);
    }
    WordTerms { exps, coeffs }
}

pub(super) fn mul_u64<R: CoeffRing>(
    a: &Poly<R>,
    b: &Poly<R>,
    model: &U64Model,
    square: bool,
) -> Poly<R> {
    let nvars = a.nvars();
    let d = model.d;
    let ta = extract(a, d);
    let tb = extract(b, d);

    // Per-variable exponent bounds of the result decide dense vs sparse.
    let mut bounds = vec![0u64; nvars];
    for v in 0..nvars {
        let ma = ta.exps.iter().map(|e| e[v]).max().unwrap_or(0) as u64;
        let mb = tb.exps.iter().map(|e| e[v]).max().unwrap_or(0) as u64;
        bounds[v] = ma + mb;
    }
    let mut cells: u128 = 1;
    for &b in &bounds {
        cells = cells.saturating_mul(b as u128 + 1);
    }
    let pairs = ta.exps.len() as u128 * tb.exps.len() as u128;
    let dense_ok = cells.saturating_mul(d as u128) <= DENSE_WORD_LIMIT as u128
        && cells <= pairs.saturating_mul(4);

    if dense_ok {
        if model.small() {
            mul_dense_lazy(a, &ta, &tb, model, &bounds, square)
        } else {
            mul_dense(a, &ta, &tb, model, &bounds)
        }
    } else {
        mul_sparse(a, &ta, &tb, model)
    }
}

fn mul_dense<R: CoeffRing>(
    proto: &Poly<R>,
    ta: &WordTerms,
    tb: &WordTerms,
    model: &U64Model,
    bounds: &[u64],
) -> Poly<R> {
    let nvars = proto.nvars();
    let d = model.d;
    let mut strides = vec![1usize; nvars];
    for v in (0..nvars.saturating_sub(1)).rev() {
        strides[v] = strides[v + 1] * (bounds[v + 1] as usize + 1);
    }
    let cells: usize = if nvars == 0 {
        1
    } else {
        strides[0] * (bounds[0] as usize + 1)
    };
    let mut grid = vec![0u64; cells * d];
    let mut scratch = vec![0u64; 2 * d.max(1) - 1];

    let idx_a: Vec<usize> = ta
        .exps
        .iter()
        .map(|e| {
            e.iter()
                .zip(&strides)
                .map(|(&x, &s)| x as usize * s)
                .sum()
        })
        .collect();
    let idx_b: Vec<usize> = tb
        .exps
        .iter()
        .map(|e| {
            e.iter()
                .zip(&strides)
                .map(|(&x, &s)| x as usize * s)
                .sum()
        })
        .collect();

    for (i, &ia) in idx_a.iter().enumerate() {
        let ca = &ta.coeffs[i * d..(i + 1) * d];
        if d == 1 {
            let av = ca[0];
            for (j, &ib) in idx_b.iter().enumerate() {
                let v = model.mul_mod(av, tb.coeffs[j]);
                model.add_assign_mod(&mut grid[ia + ib], v);
            }
        } else {
            for (j, &ib) in idx_b.iter().enumerate() {
                let cb = &tb.coeffs[j * d..(j + 1) * d];
                let cell = ia + ib;
                model.mul_acc(&mut grid[cell * d..(cell + 1) * d], ca, cb, &mut scratch);
            }
        }
    }

    let mut out = Poly::zero(proto.ring().clone(), nvars);
    let mut exps = vec![0u32; nvars];
    for cell in 0..cells {
        let words = &grid[cell * d..(cell + 1) * d];
        if words.iter().all(|&w| w == 0) {
            continue;
        }
        let mut rest = cell;
        for v in 0..nvars {
            exps[v] = (rest / strides[v]) as u32;
            rest %= strides[v];
        }
        out.terms
            .insert(exps.clone(), proto.ring().elem_from_words(words));
    }
    out
}

/// Dense path for moduli below 2^32: word products fit u64, so each grid
/// cell accumulates raw products in a u128 (no per-pair reduction; 2^64
/// additions would be needed to overflow). Extension words stay unfolded at
/// width 2d-1 until the final pass.
fn mul_dense_lazy<R: CoeffRing>(
    proto: &Poly<R>,
    ta: &WordTerms,
    tb: &WordTerms,
    model: &U64Model,
    bounds: &[u64],
    square: bool,
) -> Poly<R> {
    let nvars = proto.nvars();
    let d = model.d;
    let width = 2 * d - 1;
    let m = model.modulus;
    let mut strides = vec![1usize; nvars];
    for v in (0..nvars.saturating_sub(1)).rev() {
        strides[v] = strides[v + 1] * (bounds[v + 1] as usize + 1);
    }
    let cells: usize = if nvars == 0 {
        1
    } else {
        strides[0] * (bounds[0] as usize + 1)
    };
    let mut grid = vec![0u128; cells * width];

    let to_idx = |e: &Vec<u32>| -> usize {
        e.iter()
            .zip(&strides)
            .map(|(&x, &s)| x as usize * s)
            .sum()
    };
    let idx_a: Vec<usize> = ta.exps.iter().map(to_idx).collect();
    let idx_b: Vec<usize> = tb.exps.iter().map(to_idx).collect();

    #[inline]
    fn acc_pair(grid: &mut [u128], base: usize, ca: &[u64], cb: &[u64], factor: u128) {
        for (x, &aw) in ca.iter().enumerate() {
            if aw == 0 {
                continue;
            }
            for (y, &bw) in cb.iter().enumerate() {
                grid[base + x + y] += (aw * bw) as u128 * factor;
            }
        }
    }

    if square {
        // a == b: off-diagonal pairs contribute twice, diagonals once.
        for (i, &ia) in idx_a.iter().enumerate() {
            let ca = &ta.coeffs[i * d..(i + 1) * d];
            acc_pair(&mut grid, (ia + ia) * width, ca, ca, 1);
            for (j, &ib) in idx_a.iter().enumerate().skip(i + 1) {
                let cb = &ta.coeffs[j * d..(j + 1) * d];
                acc_pair(&mut grid, (ia + ib) * width, ca, cb, 2);
            }
        }
    } else {
        for (i, &ia) in idx_a.iter().enumerate() {
            let ca = &ta.coeffs[i * d..(i + 1) * d];
            if d == 1 {
                let av = ca[0];
                if av == 0 {
                    continue;
                }
                for (j, &ib) in idx_b.iter().enumerate() {
                    grid[ia + ib] += (av * tb.coeffs[j]) as u128;
                }
            } else {
                for (j, &ib) in idx_b.iter().enumerate() {
                    let cb = &tb.coeffs[j * d..(j + 1) * d];
                    acc_pair(&mut grid, (ia + ib) * width, ca, cb, 1);
                }
            }
        }
    }

    let mut out = Poly::zero(proto.ring().clone(), nvars);
    let mut exps = vec![0u32; nvars];
    let mut scratch = vec![0u64; width];
    for cell in 0..cells {
        let raw = &grid[cell * width..(cell + 1) * width];
        if raw.iter().all(|&w| w == 0) {
            continue;
        }
        for (s, &r) in scratch.iter_mut().zip(raw) {
            *s = (r % m as u128) as u64;
        }
        // Fold t^k for k >= d down with t^d = neg_red; descending k keeps
        // cascaded contributions (k-d+i can itself reach d) correct.
        for k in (d..width).rev() {
            let c = scratch[k];
            if c == 0 {
                continue;
            }
            scratch[k] = 0;
            for i in 0..d {
                if model.neg_red[i] == 0 {
                    continue;
                }
                let v = model.mul_mod(c, model.neg_red[i]);
                model.add_assign_mod(&mut scratch[k - d + i], v);
            }
        }
        let words = &scratch[..d];
        if words.iter().all(|&w| w == 0) {
            continue;
        }
        let mut rest = cell;
        for v in 0..nvars {
            exps[v] = (rest / strides[v]) as u32;
            rest %= strides[v];
        }
        out.terms
            .insert(exps.clone(), proto.ring().elem_from_words(words));
    }
    out
}

fn mul_sparse<R: CoeffRing>(
    proto: &Poly<R>,
    ta: &WordTerms,
    tb: &WordTerms,
    model: &U64Model,
) -> Poly<R> {
    let nvars = proto.nvars();
    let d = model.d;
    let mut acc: TermMap<Vec<u64>> = TermMap::default();
    let mut scratch = vec![0u64; 2 * d.max(1) - 1];
    // Iterate the smaller operand outermost for better reuse.
    let (outer, inner) = if ta.exps.len() <= tb.exps.len() {
        (ta, tb)
    } else {
        (tb, ta)
    };
    let mut key = vec![0u32; nvars];
    for (i, ea) in outer.exps.iter().enumerate() {
        let ca = &outer.coeffs[i * d..(i + 1) * d];
        for (j, eb) in inner.exps.iter().enumerate() {
            let cb = &inner.coeffs[j * d..(j + 1) * d];
            for v in 0..nvars {
                key[v] = ea[v].checked_add(eb[v]).expect("exponent overflow");
            }
            let slot = acc
                .entry(key.clone())
                .or_insert_with(|| vec![0u64; d]);
            model.mul_acc(slot, ca, cb, &mut scratch);
        }
    }
    let mut out = Poly::zero(proto.ring().clone(), nvars);
    for (exps, words) in acc {
        if words.iter().all(|&w| w == 0) {
            continue;
        }
        out.terms.insert(exps, proto.ring().elem_from_words(&words));
    }
    out
}
