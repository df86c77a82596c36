use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::LinForm;
use crate::error::{Error, Result};

/// Sparse polynomial in `a_1..a_n` with big integer coefficients.
///
/// Terms are keyed by exponent vectors; zero coefficients are never stored,
/// so derived equality and hashing are canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

/// Display order: larger total degree first, then larger exponent vector.
fn display_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c.into());
        p
    }

    /// The variable `a_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigInt::one());
        p
    }

    /// `sum c_i a_i`.
    pub fn linear(coords: &[i64]) -> Self {
        let n = coords.len();
        let mut p = Self::zero(n);
        for (i, &c) in coords.iter().enumerate() {
            if c != 0 {
                let mut e = vec![0; n];
                e[i] = 1;
                p.add_term(e, BigInt::from(c));
            }
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_rank(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::RankMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_rank(other)?;
        Ok(self.add(other))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_rank(other)?;
        Ok(self.mul(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "rank mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "rank mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "rank mismatch");
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Divides every coefficient by `k`, or `None` if some coefficient is not a multiple.
    pub fn exact_div_int(&self, k: &BigInt) -> Option<Poly> {
        if k.is_zero() {
            return None;
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            terms.insert(e.clone(), q);
        }
        Some(Poly {
            nvars: self.nvars,
            terms,
        })
    }

    /// Exact division by a linear form, or `None` if it does not divide.
    ///
    /// Division runs in lex order with the pivot variable of `f` largest, so the
    /// leading term of `f` is a single monomial and each step is forced.
    pub fn exact_div_linear(&self, f: &LinForm) -> Option<Poly> {
        assert_eq!(self.nvars, f.rank(), "rank mismatch");
        let j = f.pivot();
        let c = BigInt::from(f.coords()[j]);
        let lead_cmp = |a: &Vec<u32>, b: &Vec<u32>| a[j].cmp(&b[j]).then_with(|| a.cmp(b));
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((e, coeff)) = rem
            .terms
            .iter()
            .max_by(|(a, _), (b, _)| lead_cmp(a, b))
            .map(|(e, c)| (e.clone(), c.clone()))
        {
            if e[j] == 0 {
                return None;
            }
            let (m, r) = coeff.div_rem(&c);
            if !r.is_zero() {
                return None;
            }
            let mut em = e;
            em[j] -= 1;
            for (i, &fi) in f.coords().iter().enumerate() {
                if fi != 0 {
                    let mut et = em.clone();
                    et[i] += 1;
                    rem.add_term(et, -(&m * BigInt::from(fi)));
                }
            }
            q.add_term(em, m);
        }
        Some(q)
    }

    /// Exact division by any non-zero polynomial, or `None` if it does not divide.
    ///
    /// Plain leading-term division in lex order; the remainder is zero exactly
    /// when `d` divides `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, d.nvars, "rank mismatch");
        let (de, dc) = d.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((e, c)) = rem
            .terms
            .iter()
            .next_back()
            .map(|(e, c)| (e.clone(), c.clone()))
        {
            if e.iter().zip(de).any(|(a, b)| a < b) {
                return None;
            }
            let (m, r) = c.div_rem(dc);
            if !r.is_zero() {
                return None;
            }
            let em: Vec<u32> = e.iter().zip(de).map(|(a, b)| a - b).collect();
            for (te, tc) in &d.terms {
                let et: Vec<u32> = em.iter().zip(te).map(|(a, b)| a + b).collect();
                rem.add_term(et, -(&m * tc));
            }
            q.add_term(em, m);
        }
        Some(q)
    }

    /// Multiplies by a linear form.
    pub fn mul_linear(&self, f: &LinForm) -> Poly {
        self.mul(&f.to_poly())
    }

    /// Value at `a = 0`.
    pub fn specialize_zero(&self) -> BigInt {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Largest total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The common total degree of all terms, `None` if zero or inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    /// True if zero or homogeneous of degree `d`.
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    /// Parses the text produced by `Display`, with `nvars` variables.
    pub fn parse(s: &str, nvars: usize) -> Result<Poly> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut p = Poly::zero(nvars);
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut i = 0;
        while i <= bytes.len() {
            let at_split =
                i == bytes.len() || (i > start && (bytes[i] == b'+' || bytes[i] == b'-'));
            if at_split {
                let (e, c) = parse_term(&s[start..i], nvars)?;
                p.add_term(e, c);
                start = i;
            }
            i += 1;
        }
        Ok(p)
    }
}

fn parse_term(t: &str, nvars: usize) -> Result<(Vec<u32>, BigInt)> {
    let bad = || Error::Parse(format!("bad term {t:?}"));
    let (sign, body) = match t.as_bytes().first() {
        Some(b'+') => (1, &t[1..]),
        Some(b'-') => (-1, &t[1..]),
        _ => (1, t),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let mut coeff = BigInt::from(sign);
    let mut e = vec![0u32; nvars];
    for factor in body.split('*') {
        if let Some(rest) = factor.strip_prefix('a') {
            let (idx, pow) = match rest.split_once('^') {
                Some((i, p)) => (i, p.parse::<u32>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let idx: usize = idx.parse().map_err(|_| bad())?;
            if idx == 0 || idx > nvars {
                return Err(Error::Parse(format!("variable a{idx} out of range")));
            }
            e[idx - 1] += pow;
        } else {
            let c: BigInt = factor.parse().map_err(|_| bad())?;
            coeff *= c;
        }
    }
    Ok((e, coeff))
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &[u32], c: &BigInt, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            f.write_str("-")?;
        }
    } else {
        f.write_str(if neg { " - " } else { " + " })?;
    }
    let mut factors: Vec<String> = Vec::new();
    let constant = e.iter().all(|&x| x == 0);
    if !abs.is_one() || constant {
        factors.push(abs.to_string());
    }
    for (i, &x) in e.iter().enumerate() {
        match x {
            0 => {}
            1 => factors.push(format!("a{}", i + 1)),
            _ => factors.push(format!("a{}^{}", i + 1, x)),
        }
    }
    f.write_str(&factors.join("*"))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| display_cmp(a.0, b.0));
        for (k, (e, c)) in terms.into_iter().enumerate() {
            write_monomial(f, e, c, k == 0)?;
        }
        Ok(())
    }
}
