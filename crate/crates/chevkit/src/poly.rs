//! Polynomial arithmetic over prime fields: dense univariate polynomials
//! (the representation backing extension fields) and sparse multivariate
//! polynomials (numerators and denominators of rational function fields).
//!
//! Everything here works modulo a prime `p ≤ 2^20`, so coefficient products
//! stay below `2^40` and plain `u64` arithmetic never overflows.

use std::collections::BTreeMap;

// ---------------------------------------------------------------------------
// Arithmetic mod p
// ---------------------------------------------------------------------------

/// `b^e mod p` by square-and-multiply.
pub fn modpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    b %= p;
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse mod a prime `p`. Panics on zero.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero mod {p}");
    // Fermat: a^(p-2). p ≤ 2^20 keeps this cheap.
    modpow(a, p - 2, p)
}

/// Trial-division primality check, adequate for the supported range p ≤ 2^20.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials over F_p (coefficient vectors, low degree
// first, no trailing zeros).
// ---------------------------------------------------------------------------

/// Strip trailing zero coefficients in place.
pub fn utrim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn udeg(a: &[u64]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn uadd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = *c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = (out[i] + c) % p;
    }
    utrim(&mut out);
    out
}

pub fn uscale(a: &[u64], c: u64, p: u64) -> Vec<u64> {
    if c % p == 0 {
        return vec![];
    }
    a.iter().map(|x| x * c % p).collect()
}

pub fn umul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    utrim(&mut out);
    out
}

/// Division with remainder by a nonzero divisor: returns (quotient, remainder).
pub fn udivmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r: Vec<u64> = a.to_vec();
    utrim(&mut r);
    let db = b.len() - 1;
    let lb_inv = inv_mod(b[db], p);
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr] * lb_inv % p;
        q[dr - db] = c;
        for (i, bc) in b.iter().enumerate() {
            let idx = dr - db + i;
            r[idx] = (r[idx] + p - c * bc % p) % p;
        }
        utrim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    (q, r)
}

/// Monic generator of the ideal (a, b).
pub fn ugcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    utrim(&mut a);
    utrim(&mut b);
    while !b.is_empty() {
        let (_, r) = udivmod(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lc) = a.last() {
        a = uscale(&a, inv_mod(lc, p), p);
    }
    a
}

/// Inverse of `a` modulo the irreducible `m`, by the extended Euclidean
/// algorithm. Panics if `a` reduces to zero mod `m`.
pub fn uinv_mod_poly(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    // Invariants: r0 = s0·a (mod m), r1 = s1·a (mod m).
    let (mut r0, mut r1) = (m.to_vec(), udivmod(a, m, p).1);
    assert!(!r1.is_empty(), "inverse of zero in extension field");
    let (mut s0, mut s1) = (vec![], vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = udivmod(&r0, &r1, p);
        let qs = umul(&q, &s1, p);
        let s = usub(&s0, &qs, p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is now a nonzero constant multiple of gcd(a, m) = 1.
    assert_eq!(r0.len(), 1, "min_poly not irreducible or not coprime");
    let c = inv_mod(r0[0], p);
    udivmod(&uscale(&s0, c, p), m, p).1
}

pub fn usub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let negb: Vec<u64> = b.iter().map(|x| (p - x % p) % p).collect();
    uadd(a, &negb, p)
}

/// Irreducibility over F_p by exhaustive trial division: a monic polynomial
/// of degree k is reducible iff it has a monic factor of degree 1..=k/2.
/// The supported range (p^k ≤ 2^20) keeps the candidate count ≤ ~2^10.
pub fn uis_irreducible(m: &[u64], p: u64) -> bool {
    let k = match udeg(m) {
        Some(k) if k >= 1 => k,
        _ => return false,
    };
    if k == 1 {
        return true;
    }
    for d in 1..=k / 2 {
        // Enumerate monic candidates of degree d: low coefficients count in base p.
        let count = p.pow(d as u32);
        for n in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut x = n;
            for _ in 0..d {
                cand.push(x % p);
                x /= p;
            }
            cand.push(1);
            if udivmod(m, &cand, p).1.is_empty() {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Sparse multivariate polynomials over F_p
// ---------------------------------------------------------------------------

/// Multivariate polynomial over F_p: exponent vector → nonzero coefficient.
///
/// The exponent vectors all have length `nvars`. Leading terms are taken in
/// graded lexicographic order (total degree first, then lex), which is the
/// order used to normalize denominators of rational functions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    pub nvars: usize,
    pub p: u64,
    pub terms: BTreeMap<Vec<u16>, u64>,
}

impl MPoly {
    pub fn zero(nvars: usize, p: u64) -> Self {
        MPoly { nvars, p, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, p: u64, c: u64) -> Self {
        let mut t = BTreeMap::new();
        if c % p != 0 {
            t.insert(vec![0; nvars], c % p);
        }
        MPoly { nvars, p, terms: t }
    }

    pub fn one(nvars: usize, p: u64) -> Self {
        Self::constant(nvars, p, 1)
    }

    pub fn var(nvars: usize, p: u64, i: usize) -> Self {
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        let mut t = BTreeMap::new();
        t.insert(e, 1);
        MPoly { nvars, p, terms: t }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The constant coefficient (0 for the zero polynomial).
    pub fn constant_coeff(&self) -> u64 {
        self.terms.get(&vec![0u16; self.nvars]).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum()).max().unwrap_or(0)
    }

    pub fn deg_in(&self, v: usize) -> u16 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    fn insert_term(&mut self, e: Vec<u16>, c: u64) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        let p = self.p;
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = (*o.get() + c) % p;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        debug_assert_eq!((self.nvars, self.p), (other.nvars, other.p));
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        let p = self.p;
        MPoly {
            nvars: self.nvars,
            p,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), p - c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        debug_assert_eq!((self.nvars, self.p), (other.nvars, other.p));
        let mut out = MPoly::zero(self.nvars, self.p);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_term(e, c1 * c2 % self.p);
            }
        }
        out
    }

    pub fn scale(&self, c: u64) -> MPoly {
        let c = c % self.p;
        if c == 0 {
            return MPoly::zero(self.nvars, self.p);
        }
        MPoly {
            nvars: self.nvars,
            p: self.p,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c % self.p)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one(self.nvars, self.p);
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

    /// Evaluate at a point of F_p^nvars.
    pub fn eval(&self, point: &[u64]) -> u64 {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (v, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    t = t * modpow(point[v], exp as u64, self.p) % self.p;
                }
            }
            acc = (acc + t) % self.p;
        }
        acc
    }

    /// Leading exponent vector under graded lex (total degree, then lex).
    pub fn leading_exp(&self) -> Option<&Vec<u16>> {
        self.terms.keys().max_by(|a, b| {
            let (da, db): (u32, u32) =
                (a.iter().map(|&x| x as u32).sum(), b.iter().map(|&x| x as u32).sum());
            da.cmp(&db).then_with(|| a.cmp(b))
        })
    }

    pub fn leading_coeff(&self) -> u64 {
        self.leading_exp().map(|e| self.terms[e]).unwrap_or(0)
    }

    /// Make the graded-lex leading coefficient 1 (no-op on zero).
    pub fn monic(&self) -> MPoly {
        match self.leading_coeff() {
            0 | 1 => self.clone(),
            lc => self.scale(inv_mod(lc, self.p)),
        }
    }

    /// Exact division: `Some(q)` with `self = q·d`, or `None` if `d ∤ self`.
    ///
    /// Single-divisor reduction under graded lex; for exact division the
    /// leading term of the running remainder is always divisible, so a
    /// failed leading-term division proves inexactness immediately.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "exact division by zero");
        let mut rem = self.clone();
        let mut q = MPoly::zero(self.nvars, self.p);
        let de = d.leading_exp().unwrap().clone();
        let dc_inv = inv_mod(d.leading_coeff(), self.p);
        while !rem.is_zero() {
            let re = rem.leading_exp().unwrap().clone();
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Vec<u16> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let qc = rem.terms[&re] * dc_inv % self.p;
            let mut qt = MPoly::zero(self.nvars, self.p);
            qt.insert_term(qe, qc);
            rem = rem.sub(&qt.mul(d));
            q = q.add(&qt);
        }
        Some(q)
    }

    /// View as a univariate polynomial in variable `v` with MPoly coefficients
    /// (exponent of `v` zeroed out inside the coefficients).
    fn to_univar(&self, v: usize) -> BTreeMap<u16, MPoly> {
        let mut out: BTreeMap<u16, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e[v];
            let mut e2 = e.clone();
            e2[v] = 0;
            out.entry(d)
                .or_insert_with(|| MPoly::zero(self.nvars, self.p))
                .insert_term(e2, *c);
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn from_univar(nvars: usize, p: u64, v: usize, coeffs: &BTreeMap<u16, MPoly>) -> MPoly {
        let mut out = MPoly::zero(nvars, p);
        for (d, c) in coeffs {
            for (e, k) in &c.terms {
                let mut e2 = e.clone();
                e2[v] += d;
                out.insert_term(e2, *k);
            }
        }
        out
    }

    /// Greatest common divisor, normalized primitive and graded-lex monic.
    ///
    /// Recursive primitive PRS: pick the highest variable present, split off
    /// contents (gcds of coefficients, one variable fewer), then run a
    /// pseudo-remainder sequence on the primitive parts.
    pub fn gcd(&self, other: &MPoly) -> MPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        // Pick the highest variable actually appearing in either operand.
        let v = (0..self.nvars)
            .rev()
            .find(|&v| self.deg_in(v) > 0 || other.deg_in(v) > 0);
        let v = match v {
            Some(v) => v,
            None => return MPoly::one(self.nvars, self.p), // both nonzero constants
        };
        let ua = self.to_univar(v);
        let ub = other.to_univar(v);
        let cont = |u: &BTreeMap<u16, MPoly>| -> MPoly {
            let mut g = MPoly::zero(self.nvars, self.p);
            for c in u.values() {
                g = g.gcd(c);
                if g.is_constant() && !g.is_zero() {
                    break;
                }
            }
            g
        };
        let (ca, cb) = (cont(&ua), cont(&ub));
        let c = ca.gcd(&cb);
        let prim = |u: &BTreeMap<u16, MPoly>, ct: &MPoly| -> BTreeMap<u16, MPoly> {
            u.iter().map(|(d, cf)| (*d, cf.div_exact(ct).expect("content divides"))).collect()
        };
        let mut a = prim(&ua, &ca);
        let mut b = prim(&ub, &cb);
        if a.keys().last() < b.keys().last() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let db = *b.keys().last().unwrap();
            if db == 0 {
                // Primitive parts coprime in v; only the content survives.
                return c.monic();
            }
            let r = Self::pseudo_rem(&a, &b, self.nvars, self.p);
            if r.is_empty() {
                let bp = MPoly::from_univar(self.nvars, self.p, v, &b);
                let bcont = cont(&b);
                let bprim = bp.div_exact(&bcont).expect("content divides");
                return bprim.mul(&c).monic();
            }
            let rp = MPoly::from_univar(self.nvars, self.p, v, &r);
            let rcont = cont(&r);
            let rprim = rp.div_exact(&rcont).expect("content divides").to_univar(v);
            a = b;
            b = rprim;
        }
    }

    /// Pseudo-remainder of univariate views: lc(b)^(da−db+1)·a mod b.
    fn pseudo_rem(
        a: &BTreeMap<u16, MPoly>,
        b: &BTreeMap<u16, MPoly>,
        nvars: usize,
        p: u64,
    ) -> BTreeMap<u16, MPoly> {
        let db = *b.keys().last().unwrap();
        let lb = b[&db].clone();
        let mut r = a.clone();
        loop {
            let da = match r.keys().last() {
                Some(&d) if d >= db => d,
                _ => return r,
            };
            let la = r[&da].clone();
            // r := lb·r − la·x^(da−db)·b, which kills the degree-da term.
            let mut r2: BTreeMap<u16, MPoly> = BTreeMap::new();
            for (d, cf) in &r {
                r2.insert(*d, cf.mul(&lb));
            }
            for (d, cf) in b {
                let shifted = d + (da - db);
                let t = cf.mul(&la);
                let cur = r2.remove(&shifted).unwrap_or_else(|| MPoly::zero(nvars, p));
                let s = cur.sub(&t);
                if !s.is_zero() {
                    r2.insert(shifted, s);
                }
            }
            r2.retain(|_, c| !c.is_zero());
            r = r2;
        }
    }

    /// Exact polynomial square root, or `None` when `self` is not a square.
    ///
    /// In characteristic 2 a polynomial square has all exponents even and
    /// the root is obtained by halving them (p = 2 ⇒ coefficients are 1).
    /// In odd characteristic, build the root term-by-term from the leading
    /// monomial down: the next term of g is lt(f − g²)/(2·lt(g)).
    pub fn sqrt(&self) -> Option<MPoly> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if self.p == 2 {
            let mut out = MPoly::zero(self.nvars, self.p);
            for (e, c) in &self.terms {
                if e.iter().any(|&x| x % 2 != 0) {
                    return None;
                }
                out.insert_term(e.iter().map(|x| x / 2).collect(), *c);
            }
            return Some(out);
        }
        let le = self.leading_exp().unwrap().clone();
        if le.iter().any(|&x| x % 2 != 0) {
            return None;
        }
        let lc = self.leading_coeff();
        let lc_root = (0..self.p).find(|r| r * r % self.p == lc)?;
        let mut g = MPoly::zero(self.nvars, self.p);
        g.insert_term(le.iter().map(|x| x / 2).collect(), lc_root);
        let half = inv_mod(2, self.p);
        let glead = g.clone();
        loop {
            let rem = self.sub(&g.mul(&g));
            if rem.is_zero() {
                return Some(g);
            }
            let re = rem.leading_exp().unwrap().clone();
            let ge = glead.leading_exp().unwrap();
            // Next term t = lt(rem) / (2·lt(g)); fails if not divisible or
            // if the candidate term does not actually shrink the remainder.
            if re.iter().zip(ge).any(|(a, b)| a < b) {
                return None;
            }
            let te: Vec<u16> = re.iter().zip(ge).map(|(a, b)| a - b).collect();
            let tc = rem.terms[&re] * inv_mod(glead.leading_coeff(), self.p) % self.p * half
                % self.p;
            let mut t = MPoly::zero(self.nvars, self.p);
            t.insert_term(te.clone(), tc);
            // Abort if the new term fails to reduce the leading monomial:
            // that happens exactly when self is not a perfect square.
            let g2 = g.add(&t);
            let rem2 = self.sub(&g2.mul(&g2));
            if !rem2.is_zero() {
                let re2 = rem2.leading_exp().unwrap();
                let cmp = {
                    let (d1, d2): (u32, u32) = (
                        re2.iter().map(|&x| x as u32).sum(),
                        re.iter().map(|&x| x as u32).sum(),
                    );
                    d1.cmp(&d2).then_with(|| re2.cmp(&&re))
                };
                if cmp != std::cmp::Ordering::Less {
                    return None;
                }
            }
            g = g2;
        }
    }

    /// Render with the given variable names, graded-lex highest term first.
    pub fn display(&self, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<&Vec<u16>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let (da, db): (u32, u32) =
                (a.iter().map(|&x| x as u32).sum(), b.iter().map(|&x| x as u32).sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut parts = Vec::new();
        for e in keys {
            let c = self.terms[e];
            let mut factors: Vec<String> = Vec::new();
            for (v, &exp) in e.iter().enumerate() {
                match exp {
                    0 => {}
                    1 => factors.push(vars[v].clone()),
                    _ => factors.push(format!("{}^{}", vars[v], exp)),
                }
            }
            if factors.is_empty() {
                parts.push(format!("{c}"));
            } else if c == 1 {
                parts.push(factors.join("*"));
            } else {
                parts.push(format!("{}*{}", c, factors.join("*")));
            }
        }
        parts.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_basics() {
        assert_eq!(modpow(3, 4, 7), 81 % 7);
        assert_eq!(inv_mod(3, 7) * 3 % 7, 1);
        assert!(is_prime(2) && is_prime(7) && is_prime(1048573));
        assert!(!is_prime(1) && !is_prime(1048575));
    }

    #[test]
    fn univariate_divmod_roundtrip() {
        let p = 5;
        let a = vec![1, 2, 3, 4]; // 4Y^3+3Y^2+2Y+1
        let b = vec![2, 1]; // Y+2
        let (q, r) = udivmod(&a, &b, p);
        let back = uadd(&umul(&q, &b, p), &r, p);
        assert_eq!(back, a);
    }

    #[test]
    fn irreducibility_small_cases() {
        // Y^2+Y+1 over F2: no roots, irreducible.
        assert!(uis_irreducible(&[1, 1, 1], 2));
        // Y^2+1 over F2 = (Y+1)^2.
        assert!(!uis_irreducible(&[1, 0, 1], 2));
        // Y^2+1 over F5: roots ±2.
        assert!(!uis_irreducible(&[1, 0, 1], 5));
        // Y^2+2 over F5: -2 = 3 is a non-residue mod 5.
        assert!(uis_irreducible(&[2, 0, 1], 5));
        // Y^3+Y+1 over F2.
        assert!(uis_irreducible(&[1, 1, 0, 1], 2));
    }

    #[test]
    fn ext_field_inverse() {
        // GF(4) = F2[Y]/(Y^2+Y+1): g·g = g+1, g·(g+1) = 1.
        let m = vec![1, 1, 1];
        let g = vec![0, 1];
        let g2 = udivmod(&umul(&g, &g, 2), &m, 2).1;
        assert_eq!(g2, vec![1, 1]);
        let inv = uinv_mod_poly(&g, &m, 2);
        assert_eq!(udivmod(&umul(&g, &inv, 2), &m, 2).1, vec![1]);
    }

    #[test]
    fn mpoly_mul_and_eval_agree() {
        let p = 7;
        let x = MPoly::var(2, p, 0);
        let y = MPoly::var(2, p, 1);
        let f = x.add(&y).mul(&x.sub(&y)); // x^2 - y^2
        for a in 0..p {
            for b in 0..p {
                assert_eq!(f.eval(&[a, b]), (a * a % p + p - b * b % p) % p);
            }
        }
    }

    #[test]
    fn mpoly_gcd_common_factor() {
        let p = 5;
        let x = MPoly::var(2, p, 0);
        let y = MPoly::var(2, p, 1);
        let common = x.add(&y); // x+y
        let a = common.mul(&x); // x(x+y)
        let b = common.mul(&y.add(&MPoly::one(2, p))); // (y+1)(x+y)
        let g = a.gcd(&b);
        assert_eq!(g, common.monic());
    }

    #[test]
    fn mpoly_gcd_coprime() {
        let p = 3;
        let x = MPoly::var(2, p, 0);
        let y = MPoly::var(2, p, 1);
        assert!(x.gcd(&y).is_constant());
    }

    #[test]
    fn mpoly_sqrt_char2() {
        let p = 2;
        let x = MPoly::var(2, p, 0);
        let y = MPoly::var(2, p, 1);
        let f = x.add(&y);
        let sq = f.mul(&f); // x^2+y^2 by Frobenius
        assert_eq!(sq.sqrt(), Some(f.clone()));
        assert_eq!(f.sqrt(), None);
    }

    #[test]
    fn mpoly_sqrt_odd_char() {
        let p = 7;
        let x = MPoly::var(2, p, 0);
        let y = MPoly::var(2, p, 1);
        let f = x.mul(&x).add(&y.scale(3)).add(&MPoly::constant(2, p, 2));
        let sq = f.mul(&f);
        let r = sq.sqrt().expect("perfect square");
        assert!(r == f || r == f.neg());
        assert_eq!(x.mul(&y).sqrt(), None);
    }

    #[test]
    fn div_exact_detects_inexact() {
        let p = 5;
        let x = MPoly::var(2, p, 0);
        let y = MPoly::var(2, p, 1);
        let prod = x.add(&y).mul(&x.add(&MPoly::one(2, p)));
        assert_eq!(prod.div_exact(&x.add(&y)), Some(x.add(&MPoly::one(2, p))));
        assert_eq!(prod.div_exact(&y), None);
    }
}
