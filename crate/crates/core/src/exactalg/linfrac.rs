use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::Poly;
use crate::error::{Error, Result};

/// A non-zero integer linear form whose first non-zero coordinate is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinForm(Vec<i64>);

impl LinForm {
    /// Canonicalizes `coords`, returning the form and the sign that was removed.
    pub fn new(coords: Vec<i64>) -> Result<(LinForm, i64)> {
        let lead = coords
            .iter()
            .copied()
            .find(|&c| c != 0)
            .ok_or(Error::ZeroForm)?;
        if lead > 0 {
            Ok((LinForm(coords), 1))
        } else {
            Ok((LinForm(coords.into_iter().map(|c| -c).collect()), -1))
        }
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Index of the first non-zero coordinate.
    pub fn pivot(&self) -> usize {
        self.0.iter().position(|&c| c != 0).expect("non-zero form")
    }

    pub fn to_poly(&self) -> Poly {
        Poly::linear(&self.0)
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// `num / prod f^k` with the linear forms `f` in canonical sign.
///
/// The global sign lives in the numerator. After normalization no
/// denominator form divides the numerator, which makes the representation
/// canonical as long as the forms are primitive, since distinct primitive
/// forms in canonical sign are coprime irreducibles. Roots are primitive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinFrac {
    num: Poly,
    den: BTreeMap<LinForm, u32>,
}

impl LinFrac {
    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(Poly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(Poly::one(nvars))
    }

    pub fn from_poly(num: Poly) -> Self {
        Self {
            num,
            den: BTreeMap::new(),
        }
    }

    /// `sign / prod forms`, each form given by raw coordinates.
    pub fn reciprocal_of_product(nvars: usize, sign: i64, forms: &[Vec<i64>]) -> Result<Self> {
        let mut s = sign;
        let mut den = BTreeMap::new();
        for f in forms {
            let (form, sg) = LinForm::new(f.clone())?;
            s *= sg;
            *den.entry(form).or_insert(0) += 1;
        }
        Ok(Self {
            num: Poly::constant(nvars, s),
            den,
        })
    }

    /// `sign * prod forms` as a polynomial fraction.
    pub fn product_of_forms(nvars: usize, sign: i64, forms: &[Vec<i64>]) -> Self {
        let mut p = Poly::constant(nvars, sign);
        for f in forms {
            p = p.mul(&Poly::linear(f));
        }
        Self::from_poly(p)
    }

    /// Builds `num / den` and normalizes.
    pub fn new(num: Poly, den: BTreeMap<LinForm, u32>) -> Self {
        let mut x = Self { num, den };
        x.normalize();
        x
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<LinForm, u32> {
        &self.den
    }

    /// The denominator multiplied out.
    pub fn denominator_poly(&self) -> Poly {
        let mut p = Poly::one(self.nvars());
        for (f, &k) in &self.den {
            for _ in 0..k {
                p = p.mul_linear(f);
            }
        }
        p
    }

    pub fn den_degree(&self) -> u32 {
        self.den.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// Cancels every denominator form that divides the numerator.
    pub fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let forms: Vec<LinForm> = self.den.keys().cloned().collect();
        for f in forms {
            let k = self.den.get_mut(&f).expect("present");
            while *k > 0 {
                match self.num.exact_div_linear(&f) {
                    Some(q) => {
                        self.num = q;
                        *k -= 1;
                    }
                    None => break,
                }
            }
            if *k == 0 {
                self.den.remove(&f);
            }
        }
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    /// Least common multiple of two denominators, with the cofactors.
    fn common_den(&self, other: &LinFrac) -> (BTreeMap<LinForm, u32>, Poly, Poly) {
        let n = self.nvars();
        let mut lcm = self.den.clone();
        for (f, &k) in &other.den {
            let e = lcm.entry(f.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        let cofactor = |den: &BTreeMap<LinForm, u32>| {
            let mut p = Poly::one(n);
            for (f, &k) in &lcm {
                let have = den.get(f).copied().unwrap_or(0);
                for _ in have..k {
                    p = p.mul_linear(f);
                }
            }
            p
        };
        let c1 = cofactor(&self.den);
        let c2 = cofactor(&other.den);
        (lcm, c1, c2)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &LinFrac) -> LinFrac {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            return LinFrac::new(self.num.add(&other.num), self.den.clone());
        }
        let (lcm, c1, c2) = self.common_den(other);
        LinFrac::new(self.num.mul(&c1).add(&other.num.mul(&c2)), lcm)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &LinFrac) -> LinFrac {
        self.add(&other.neg())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> LinFrac {
        LinFrac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &LinFrac) -> LinFrac {
        if self.is_zero() || other.is_zero() {
            return LinFrac::zero(self.nvars());
        }
        let mut den = self.den.clone();
        for (f, &k) in &other.den {
            *den.entry(f.clone()).or_insert(0) += k;
        }
        LinFrac::new(self.num.mul(&other.num), den)
    }

    pub fn mul_poly(&self, p: &Poly) -> LinFrac {
        LinFrac::new(self.num.mul(p), self.den.clone())
    }

    /// Factors `p` as `c * prod f` over linear forms, for constants and single forms.
    fn linear_factors(p: &Poly) -> Option<(BigInt, Vec<LinForm>)> {
        match p.degree()? {
            0 => Some((p.specialize_zero(), Vec::new())),
            1 if p.homogeneous_degree() == Some(1) => {
                let n = p.nvars();
                let mut coords = vec![0i64; n];
                for (e, c) in p.terms() {
                    let i = e.iter().position(|&x| x == 1)?;
                    coords[i] = i64::try_from(c).ok()?;
                }
                let (f, sign) = LinForm::new(coords).ok()?;
                Some((BigInt::from(sign), vec![f]))
            }
            _ => None,
        }
    }

    /// `self / other`, where the numerator of `other` is `±1` or `±` a linear form.
    pub fn div_by(&self, other: &LinFrac) -> Result<LinFrac> {
        let (c, forms) = Self::linear_factors(&other.num)
            .filter(|(c, _)| c.abs().is_one())
            .ok_or_else(|| Error::DivisionByNonLinearProduct(other.to_string()))?;
        let mut num = self.num.scale(&c);
        for (f, &k) in &other.den {
            for _ in 0..k {
                num = num.mul_linear(f);
            }
        }
        let mut den = self.den.clone();
        for f in forms {
            *den.entry(f).or_insert(0) += 1;
        }
        Ok(LinFrac::new(num, den))
    }

    /// The numerator as a polynomial, if the denominator is empty.
    pub fn to_poly(&self) -> Result<Poly> {
        if self.den.is_empty() {
            Ok(self.num.clone())
        } else {
            Err(Error::NotPolynomial(self.to_string()))
        }
    }

    pub fn specialize_zero(&self) -> Result<BigInt> {
        Ok(self.to_poly()?.specialize_zero())
    }

    /// Degree of a homogeneous fraction, numerator degree minus denominator count.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        Some(self.num.homogeneous_degree()? as i64 - self.den_degree() as i64)
    }

    /// `num * prod(other den)` and `other num * prod(self den)`; equal iff the fractions are.
    pub fn cross_multiplied(&self, other: &LinFrac) -> (Poly, Poly) {
        let mut a = self.num.clone();
        for (f, &k) in &other.den {
            a = a.mul(&f.to_poly().pow(k));
        }
        let mut b = other.num.clone();
        for (f, &k) in &self.den {
            b = b.mul(&f.to_poly().pow(k));
        }
        (a, b)
    }

    /// Parses `poly` or `(poly)/((form)^k*(form))`.
    pub fn parse(s: &str, nvars: usize) -> Result<LinFrac> {
        let s = s.trim();
        let Some(slash) = top_level_find(s, b'/') else {
            return Ok(LinFrac::from_poly(Poly::parse(s, nvars)?));
        };
        let num = Poly::parse(strip_parens(&s[..slash])?, nvars)?;
        let den_text = strip_parens(&s[slash + 1..])?;
        let mut den: BTreeMap<LinForm, u32> = BTreeMap::new();
        let mut sign = 1i64;
        for factor in split_top_level(den_text, b'*') {
            let factor = factor.trim();
            let (base, pow) = match factor.rfind(")^") {
                Some(i) => (
                    &factor[..=i],
                    factor[i + 2..]
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
                ),
                None => (factor, 1),
            };
            let p = Poly::parse(strip_parens(base)?, nvars)?;
            let (c, forms) = Self::linear_factors(&p)
                .filter(|(c, f)| c.abs().is_one() && f.len() == 1)
                .ok_or_else(|| Error::Parse(format!("not a linear form: {base:?}")))?;
            if c.is_negative() && pow % 2 == 1 {
                sign = -sign;
            }
            *den.entry(forms[0].clone()).or_insert(0) += pow;
        }
        Ok(LinFrac::new(num.scale(&BigInt::from(sign)), den))
    }
}

fn top_level_find(s: &str, needle: u8) -> Option<usize> {
    let mut depth = 0i32;
    for (i, b) in s.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            _ if b == needle && depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn split_top_level(s: &str, sep: u8) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, b) in s.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            _ if b == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn strip_parens(s: &str) -> Result<&str> {
    let s = s.trim();
    s.strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("expected parenthesized text, got {s:?}")))
}

impl fmt::Display for LinFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/(", self.num)?;
        for (k, (form, &m)) in self.den.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "({form})")?;
            if m > 1 {
                write!(f, "^{m}")?;
            }
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(s: &str) -> LinFrac {
        LinFrac::parse(s, 2).unwrap()
    }

    #[test]
    fn fraction_examples() {
        let x = LinFrac::reciprocal_of_product(1, 1, &[vec![1]]).unwrap();
        let y = LinFrac::reciprocal_of_product(1, 1, &[vec![-1]]).unwrap();
        assert!(x.add(&y).is_zero());
        let sq = x.mul(&x);
        assert_eq!(sq.to_string(), "(1)/((a1)^2)");
        let mut den = BTreeMap::new();
        den.insert(LinForm::new(vec![1, 0]).unwrap().0, 1);
        let z = LinFrac::new(Poly::parse("a1^2 - a1*a2", 2).unwrap(), den);
        assert_eq!(z, LinFrac::from_poly(Poly::parse("a1 - a2", 2).unwrap()));
    }

    #[test]
    fn specialize() {
        assert_eq!(
            frac("(a1^2 - a2^2)/((a1 + a2))").specialize_zero().unwrap(),
            BigInt::from(0)
        );
        assert!(frac("(1)/((a1))").specialize_zero().is_err());
    }

    #[test]
    fn text_round_trip() {
        for s in ["(a1 - 3)/((a1)^2*(a1 + a2))", "a1*a2", "(-1)/((a2))", "0"] {
            let x = frac(s);
            assert_eq!(x.to_string(), s);
            assert_eq!(frac(&x.to_string()), x);
        }
        assert_eq!(frac("(1)/((-a1))"), frac("(-1)/((a1))"));
        assert!(LinFrac::parse("(1)/((a1^2))", 2).is_err());
    }

    #[test]
    fn div_by_euler_class() {
        let x = frac("(a1 + a2)/((a1)^2)");
        let e = LinFrac::reciprocal_of_product(2, -1, &[vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(
            x.div_by(&e).unwrap(),
            frac("-a1^2 - 2*a1*a2 - a2^2").div_by(&frac("a1")).unwrap()
        );
        assert!(x.div_by(&frac("a1^2")).is_err());
        assert!(x.div_by(&frac("2")).is_err());
    }

    #[test]
    fn zero_form_rejected() {
        assert!(matches!(LinForm::new(vec![0, 0]), Err(Error::ZeroForm)));
    }
}
