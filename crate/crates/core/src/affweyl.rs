//! The affine Weyl group `W_af = W ⋉ Q^vee`.
//!
//! An element `(w, lam)` stands for `w t_lam` and acts on the Cartan algebra by
//! `x ↦ w(x + lam)`. The affine simple reflection `s_0` is `t_{alpha_0^vee}
//! s_{alpha_0}`, the reflection through the wall `alpha_0(x) = 1`, which in
//! `(w, lam)` form is `(s_{alpha_0}, -alpha_0^vee)`.
//!
//! Cosets `x W` are in bijection with `Q^vee` through the center
//! `x · 0 = w(lam)`; `W_af^-` is the set of minimal elements of these cosets.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::rootdata::{parse_labels, CoweightVec, RootSystem, RootVec, WeylElement};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineWeylElement {
    pub w: WeylElement,
    pub lam: CoweightVec,
}

impl AffineWeylElement {
    pub fn new(w: WeylElement, lam: CoweightVec) -> Self {
        Self { w, lam }
    }

    /// The coset center `w(lam)`.
    pub fn center(&self) -> CoweightVec {
        self.w.act_coweight(&self.lam)
    }
}

/// A point of the real Cartan algebra in simple-coroot coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffinePoint(pub Vec<BigRational>);

impl AffinePoint {
    pub fn origin(rank: usize) -> Self {
        Self(vec![BigRational::from_integer(BigInt::from(0)); rank])
    }

    pub fn from_lattice(mu: &CoweightVec) -> Self {
        Self(
            mu.coords()
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }
}

/// Length of `t_mu w` by the Iwahori-Matsumoto count.
fn im_length(rs: &RootSystem, w: &WeylElement, mu: &CoweightVec) -> usize {
    let mut total = 0i64;
    for alpha in rs.positive_roots() {
        let m = rs.pair(alpha, mu);
        if w.inv_act_root(alpha).is_positive() {
            total += m.abs();
        } else {
            total += (m - 1).abs();
        }
    }
    total as usize
}

/// Largest length that [`AffineWeylGroup::enumerate_waf_minus`] will explore at a rank.
pub fn enumeration_cap(rank: usize) -> usize {
    match rank {
        0..=2 => 12,
        3 => 8,
        _ => 6,
    }
}

/// Affine Weyl group of a root system, with its generators precomputed.
#[derive(Debug, Clone)]
pub struct AffineWeylGroup {
    rs: Arc<RootSystem>,
    generators: Vec<AffineWeylElement>,
    finite: Vec<WeylElement>,
}

impl AffineWeylGroup {
    pub fn new(rs: Arc<RootSystem>) -> Self {
        let r = rs.rank();
        let theta = rs.highest_root().clone();
        let s_theta = rs.reflection(&theta).expect("highest root is a root");
        let mut generators = vec![AffineWeylElement::new(s_theta, rs.highest_coroot().neg())];
        for i in 0..r {
            generators.push(AffineWeylElement::new(
                rs.simple_reflection(i),
                CoweightVec::zeros(r),
            ));
        }
        let finite = rs
            .enumerate_weyl(&crate::rootdata::ParabolicType::borel())
            .all;
        Self {
            rs,
            generators,
            finite,
        }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn identity(&self) -> AffineWeylElement {
        AffineWeylElement::new(self.rs.identity(), CoweightVec::zeros(self.rank()))
    }

    /// Affine simple reflection `s_i`, `i` in `0..=r`.
    pub fn generator(&self, i: usize) -> &AffineWeylElement {
        &self.generators[i]
    }

    /// The finite Weyl group, sorted by length then reduced word.
    pub fn finite_elements(&self) -> &[WeylElement] {
        &self.finite
    }

    fn check(&self, x: &AffineWeylElement) -> Result<()> {
        if x.lam.rank() != self.rank() || x.w.rank() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: x.lam.rank(),
            });
        }
        Ok(())
    }

    /// `(w1, l1)(w2, l2) = (w1 w2, w2^{-1}(l1) + l2)`.
    pub fn aff_mul(
        &self,
        x: &AffineWeylElement,
        y: &AffineWeylElement,
    ) -> Result<AffineWeylElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub(crate) fn mul(&self, x: &AffineWeylElement, y: &AffineWeylElement) -> AffineWeylElement {
        AffineWeylElement::new(
            self.rs.compose(&x.w, &y.w),
            y.w.inv_act_coweight(&x.lam).add(&y.lam),
        )
    }

    pub fn inverse(&self, x: &AffineWeylElement) -> AffineWeylElement {
        // (w t_l)^{-1} = t_{-l} w^{-1} = w^{-1} t_{-w(l)}
        AffineWeylElement::new(x.w.inverse(), x.w.act_coweight(&x.lam).neg())
    }

    /// `w t_lam · p = w(p + lam)`.
    pub fn aff_act(&self, x: &AffineWeylElement, p: &AffinePoint) -> Result<AffinePoint> {
        self.check(x)?;
        if p.0.len() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: p.0.len(),
            });
        }
        let mat = x.w.action_matrix();
        let shifted: Vec<BigRational> =
            p.0.iter()
                .zip(x.lam.coords())
                .map(|(a, &l)| a + BigRational::from_integer(BigInt::from(l)))
                .collect();
        Ok(AffinePoint(
            mat.iter()
                .map(|row| {
                    row.iter()
                        .zip(&shifted)
                        .map(|(&m, v)| v * BigRational::from_integer(BigInt::from(m)))
                        .sum()
                })
                .collect(),
        ))
    }

    /// Length via the Iwahori-Matsumoto formula, valid for every element.
    pub fn length_im(&self, x: &AffineWeylElement) -> usize {
        im_length(&self.rs, &x.w, &x.center())
    }

    /// Length of an element of `W_af^-` as a count of affine walls.
    ///
    /// The regular dominant perturbation `a → 0+` is resolved exactly: a
    /// positive root contributes `alpha(w(lam)) - 1` when `alpha(w(lam)) >= 1`,
    /// a negative root contributes `alpha(w(lam))` when `alpha(w(lam)) >= 0`.
    pub fn length_minrep(&self, x: &AffineWeylElement) -> Result<usize> {
        if !self.is_coset_min(x) {
            return Err(Error::NotCosetMinimal(self.format(x)));
        }
        Ok(self.wall_count(&x.center()) as usize)
    }

    /// `sum over roots alpha with alpha(mu - a) > 0 of floor(alpha(mu - a))`.
    pub(crate) fn wall_count(&self, mu: &CoweightVec) -> i64 {
        self.rs
            .all_roots()
            .map(|alpha| floor_shifted(&alpha, self.rs.pair(&alpha, mu)))
            .sum()
    }

    pub fn is_coset_min(&self, x: &AffineWeylElement) -> bool {
        let l = self.length_im(x);
        (1..=self.rank()).all(|i| self.length_im(&self.mul(x, &self.generators[i])) > l)
    }

    /// Lexicographically least reduced word, with `0` standing for `s_0`.
    pub fn reduced_word(&self, x: &AffineWeylElement) -> Vec<usize> {
        let mut cur = x.clone();
        let mut len = self.length_im(&cur);
        let mut word = Vec::with_capacity(len);
        while len > 0 {
            let (i, next) = (0..=self.rank())
                .map(|i| (i, self.mul(&self.generators[i], &cur)))
                .find(|(_, y)| self.length_im(y) < len)
                .expect("non-identity element has a left descent");
            word.push(i);
            cur = next;
            len -= 1;
        }
        word
    }

    /// Product of affine simple reflections.
    pub fn from_word(&self, word: &[usize]) -> Result<AffineWeylElement> {
        let mut x = self.identity();
        for &i in word {
            if i > self.rank() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    rank: self.rank(),
                });
            }
            x = self.mul(&x, &self.generators[i]);
        }
        Ok(x)
    }

    pub fn is_reduced(&self, word: &[usize]) -> Result<bool> {
        Ok(self.length_im(&self.from_word(word)?) == word.len())
    }

    /// Minimal element of the coset `t_mu W`.
    pub fn coset_min_rep(&self, mu: &CoweightVec) -> AffineWeylElement {
        self.finite
            .iter()
            .map(|u| AffineWeylElement::new(u.clone(), u.inv_act_coweight(mu)))
            .min_by_key(|x| self.length_im(x))
            .expect("finite Weyl group is non-empty")
    }

    /// `W_af^-` up to `max_len`, sorted by length then reduced word.
    pub fn enumerate_waf_minus(&self, max_len: usize) -> Result<Vec<(AffineWeylElement, usize)>> {
        let cap = enumeration_cap(self.rank());
        if max_len > cap {
            return Err(Error::EnumerationCap {
                requested: max_len,
                cap,
                rank: self.rank(),
            });
        }
        // Suffixes of minimal coset representatives are minimal, so the search
        // can grow on the left and stay inside W_af^- layer by layer.
        let mut out = vec![(self.identity(), 0usize)];
        let mut layer = vec![self.identity()];
        for len in 1..=max_len {
            let mut next: BTreeSet<(Vec<usize>, AffineWeylElement)> = BTreeSet::new();
            let mut seen: HashSet<AffineWeylElement> = HashSet::new();
            for x in &layer {
                for g in &self.generators {
                    let y = self.mul(g, x);
                    if self.length_im(&y) == len && self.is_coset_min(&y) && seen.insert(y.clone())
                    {
                        next.insert((self.reduced_word(&y), y));
                    }
                }
            }
            layer = next.into_iter().map(|(_, y)| y).collect();
            out.extend(layer.iter().map(|y| (y.clone(), len)));
        }
        Ok(out)
    }

    /// All of `W_af` up to `max_len`, sorted by length then reduced word.
    pub fn enumerate_all(&self, max_len: usize) -> Result<Vec<(AffineWeylElement, usize)>> {
        let cap = enumeration_cap(self.rank());
        if max_len > cap {
            return Err(Error::EnumerationCap {
                requested: max_len,
                cap,
                rank: self.rank(),
            });
        }
        let mut seen: HashSet<AffineWeylElement> = HashSet::new();
        seen.insert(self.identity());
        let mut out = vec![(self.identity(), 0usize)];
        let mut layer = vec![self.identity()];
        for len in 1..=max_len {
            let mut next: BTreeSet<(Vec<usize>, AffineWeylElement)> = BTreeSet::new();
            for x in &layer {
                for g in &self.generators {
                    let y = self.mul(x, g);
                    if self.length_im(&y) == len && seen.insert(y.clone()) {
                        next.insert((self.reduced_word(&y), y));
                    }
                }
            }
            layer = next.into_iter().map(|(_, y)| y).collect();
            out.extend(layer.iter().map(|y| (y.clone(), len)));
        }
        Ok(out)
    }

    /// `w=s1*s2;lam=-1,0`.
    pub fn format(&self, x: &AffineWeylElement) -> String {
        format!("w={};lam={}", self.rs.word_string(&x.w), x.lam)
    }

    /// Parses either `w=...;lam=...` or an affine word such as `s0*s1`.
    pub fn parse(&self, s: &str) -> Result<AffineWeylElement> {
        let s = s.trim();
        if !s.contains('=') {
            let word = parse_labels(s, 0)?;
            return self.from_word(&word);
        }
        let mut w = None;
        let mut lam = None;
        for part in s.split(';') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in {part:?}")))?;
            match key.trim() {
                "w" => w = Some(self.rs.parse_word(value)?),
                "lam" => {
                    let coords = value
                        .split(',')
                        .map(|c| {
                            c.trim()
                                .parse::<i64>()
                                .map_err(|_| Error::Parse(format!("bad coordinate {c:?}")))
                        })
                        .collect::<Result<Vec<i64>>>()?;
                    if coords.len() != self.rank() {
                        return Err(Error::RankMismatch {
                            expected: self.rank(),
                            got: coords.len(),
                        });
                    }
                    lam = Some(CoweightVec::new(coords));
                }
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            }
        }
        match (w, lam) {
            (Some(w), Some(lam)) => Ok(AffineWeylElement::new(w, lam)),
            _ => Err(Error::Parse(format!("missing w or lam in {s:?}"))),
        }
    }

    pub fn display<'a>(&'a self, x: &'a AffineWeylElement) -> impl fmt::Display + 'a {
        struct D<'a>(&'a AffineWeylGroup, &'a AffineWeylElement);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.format(self.1))
            }
        }
        D(self, x)
    }
}

/// `floor(alpha(mu) - eps)` if `alpha(mu) - eps > 0`, else 0, for a regular
/// dominant `eps → 0+`; `value = alpha(mu)`.
pub(crate) fn floor_shifted(alpha: &RootVec, value: i64) -> i64 {
    if alpha.is_positive() {
        if value >= 1 {
            value - 1
        } else {
            0
        }
    } else if value >= 0 {
        value
    } else {
        0
    }
}
