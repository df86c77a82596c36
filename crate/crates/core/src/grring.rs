//! Equivariant Pontryagin ring of the affine Grassmannian.
//!
//! Affine Schubert classes are expanded in the fixed-point basis `eta_mu` by
//! summing over the torus-fixed points of a Bott-Samelson resolution. Products
//! are convolutions in that basis, and a triangular elimination converts them
//! back to Schubert classes.
//!
//! Tangent weights: for a reduced word `i_1..i_N` and a choice `eps`, the
//! `k`-th weight is `p_{k-1}(beta_k)`, negated when `eps_k` is the reflection,
//! where `p_{k-1}` is the finite part of `eps_1 ... eps_{k-1}` and `beta_k` is
//! `alpha_i` for `i >= 1` and `-theta` for `i = 0` (affine roots evaluated at
//! `delta = 0`).

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use crate::affweyl::{AffineWeylElement, AffineWeylGroup};
use crate::error::{Error, ResidualKind, Result};
use crate::exactalg::{LinFrac, Poly};
use crate::rootdata::{CoweightVec, RootVec, WeylElement};

/// One torus-fixed point of a Bott-Samelson variety.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BSDHFixedPoint {
    pub choice: Vec<bool>,
    pub mu_gamma: CoweightVec,
    /// Tangent weights, one per letter.
    pub weights: Vec<RootVec>,
    /// `1 / prod weights`.
    pub euler: LinFrac,
}

/// A class in the fixed-point basis.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EtaVector {
    pub entries: BTreeMap<CoweightVec, LinFrac>,
}

impl EtaVector {
    pub fn unit(mu: CoweightVec, nvars: usize) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(mu, LinFrac::one(nvars));
        Self { entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, mu: &CoweightVec) -> Option<&LinFrac> {
        self.entries.get(mu)
    }

    /// Adds `c * other` in place.
    pub fn add_scaled(&mut self, other: &EtaVector, c: &LinFrac) {
        for (mu, x) in &other.entries {
            let term = x.mul(c);
            accumulate(&mut self.entries, mu.clone(), term);
        }
    }
}

/// A class in the affine Schubert basis.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GrClassVector {
    pub entries: BTreeMap<AffineWeylElement, LinFrac>,
}

impl GrClassVector {
    pub fn unit(x: AffineWeylElement, nvars: usize) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(x, LinFrac::one(nvars));
        Self { entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coefficients as polynomials, failing on any leftover denominator.
    pub fn to_polys(&self) -> Result<BTreeMap<AffineWeylElement, Poly>> {
        self.entries
            .iter()
            .map(|(x, c)| Ok((x.clone(), c.to_poly()?)))
            .collect()
    }
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, LinFrac>, key: K, term: LinFrac) {
    if term.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(term);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get().add(&term);
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

/// Localization engine for one root system, with memoized expansions.
#[derive(Debug)]
pub struct GrRing {
    group: Arc<AffineWeylGroup>,
    eta_cache: RwLock<HashMap<AffineWeylElement, Arc<EtaVector>>>,
    rep_cache: RwLock<HashMap<CoweightVec, AffineWeylElement>>,
}

impl GrRing {
    pub fn new(group: Arc<AffineWeylGroup>) -> Self {
        Self {
            group,
            eta_cache: RwLock::new(HashMap::new()),
            rep_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn group(&self) -> &AffineWeylGroup {
        &self.group
    }

    fn nvars(&self) -> usize {
        self.group.rank()
    }

    /// Fixed points of the Bott-Samelson variety of a reduced affine word.
    pub fn bsdh_fixed_points(&self, word: &[usize]) -> Result<Vec<BSDHFixedPoint>> {
        let g = &*self.group;
        if !g.is_reduced(word)? {
            return Err(Error::NonReducedWord(word.to_vec()));
        }
        let rs = g.root_system();
        let n = word.len();
        let betas: Vec<RootVec> = word
            .iter()
            .map(|&i| {
                if i == 0 {
                    rs.highest_root().neg()
                } else {
                    rs.simple_root(i - 1)
                }
            })
            .collect();
        let mut out = Vec::with_capacity(1 << n);
        let mut choice = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        self.walk(
            word,
            &betas,
            &g.identity(),
            &mut choice,
            &mut weights,
            &mut out,
        )?;
        Ok(out)
    }

    fn walk(
        &self,
        word: &[usize],
        betas: &[RootVec],
        prefix: &AffineWeylElement,
        choice: &mut Vec<bool>,
        weights: &mut Vec<RootVec>,
        out: &mut Vec<BSDHFixedPoint>,
    ) -> Result<()> {
        let k = choice.len();
        if k == word.len() {
            let forms: Vec<Vec<i64>> = weights.iter().map(|w| w.coords().to_vec()).collect();
            out.push(BSDHFixedPoint {
                choice: choice.clone(),
                mu_gamma: prefix.center(),
                weights: weights.clone(),
                euler: LinFrac::reciprocal_of_product(self.nvars(), 1, &forms)?,
            });
            return Ok(());
        }
        let base: &WeylElement = &prefix.w;
        let weight = base.act_root(&betas[k]);
        for on in [false, true] {
            choice.push(on);
            if on {
                weights.push(weight.neg());
                let next = self.group.mul(prefix, self.group.generator(word[k]));
                self.walk(word, betas, &next, choice, weights, out)?;
            } else {
                weights.push(weight.clone());
                self.walk(word, betas, prefix, choice, weights, out)?;
            }
            weights.pop();
            choice.pop();
        }
        Ok(())
    }

    /// Fixed-point expansion computed from a given reduced word of an element.
    pub fn eta_expand_word(&self, word: &[usize]) -> Result<EtaVector> {
        let mut entries: BTreeMap<CoweightVec, LinFrac> = BTreeMap::new();
        for p in self.bsdh_fixed_points(word)? {
            accumulate(&mut entries, p.mu_gamma, p.euler);
        }
        Ok(EtaVector { entries })
    }

    /// Fixed-point expansion of the affine Schubert class `xi_x`, memoized.
    pub fn eta_expand(&self, x: &AffineWeylElement) -> Result<Arc<EtaVector>> {
        if let Some(v) = self.eta_cache.read().expect("eta cache").get(x) {
            return Ok(v.clone());
        }
        if !self.group.is_coset_min(x) {
            return Err(Error::NotCosetMinimal(self.group.format(x)));
        }
        let v = Arc::new(self.eta_expand_word(&self.group.reduced_word(x))?);
        self.eta_cache
            .write()
            .expect("eta cache")
            .entry(x.clone())
            .or_insert_with(|| v.clone());
        Ok(v)
    }

    /// Convolution `eta_mu * eta_nu = eta_{mu + nu}`, extended bilinearly.
    pub fn pontryagin_eta(&self, u: &EtaVector, v: &EtaVector) -> Result<EtaVector> {
        let mut entries: BTreeMap<CoweightVec, LinFrac> = BTreeMap::new();
        for (m1, c1) in &u.entries {
            for (m2, c2) in &v.entries {
                if m1.rank() != self.nvars() || m2.rank() != self.nvars() {
                    return Err(Error::RankMismatch {
                        expected: self.nvars(),
                        got: m1.rank().max(m2.rank()),
                    });
                }
                accumulate(&mut entries, m1.add(m2), c1.mul(c2));
            }
        }
        Ok(EtaVector { entries })
    }

    /// Minimal element of the coset with center `mu`, memoized.
    pub fn coset_rep(&self, mu: &CoweightVec) -> AffineWeylElement {
        if let Some(x) = self.rep_cache.read().expect("rep cache").get(mu) {
            return x.clone();
        }
        let x = self.group.coset_min_rep(mu);
        self.rep_cache
            .write()
            .expect("rep cache")
            .insert(mu.clone(), x.clone());
        x
    }

    /// Rewrites a fixed-point expansion in the affine Schubert basis.
    ///
    /// The expansion of `xi_z` is supported on cosets whose minimal
    /// representatives are Bruhat below `z`, with `z`'s own center the unique
    /// point of top length, so clearing the longest support point first is
    /// triangular.
    pub fn eta_to_xi(&self, v: &EtaVector, search_bound: usize) -> Result<GrClassVector> {
        let mut residual = v.entries.clone();
        let mut out = GrClassVector::default();
        let guard = 4 * v.entries.len() + 64;
        for _ in 0..guard {
            let Some((len, mu)) = residual
                .keys()
                .map(|mu| (self.group.wall_count(mu) as usize, mu.clone()))
                .max()
            else {
                return Ok(out);
            };
            if len > search_bound {
                return Err(Error::ResidualNonzero {
                    kind: ResidualKind::BoundExceeded {
                        needed: len,
                        bound: search_bound,
                    },
                    detail: format!("support point {mu}"),
                });
            }
            let z = self.coset_rep(&mu);
            let ez = self.eta_expand(&z)?;
            let diag = ez.get(&mu).ok_or_else(|| Error::ResidualNonzero {
                kind: ResidualKind::DiagonalMissing,
                detail: self.group.format(&z),
            })?;
            let c = residual[&mu].div_by(diag)?;
            for (nu, x) in &ez.entries {
                accumulate(&mut residual, nu.clone(), x.mul(&c).neg());
            }
            if residual.contains_key(&mu) {
                return Err(Error::ResidualNonzero {
                    kind: ResidualKind::Inconsistent,
                    detail: format!("pivot {mu} not cleared"),
                });
            }
            out.entries.insert(z, c);
        }
        Err(Error::ResidualNonzero {
            kind: ResidualKind::NoProgress,
            detail: format!("{} support points left", residual.len()),
        })
    }

    /// `xi_u * xi_v` in the affine Schubert basis with polynomial coefficients.
    pub fn gr_structure_constants(
        &self,
        u: &AffineWeylElement,
        v: &AffineWeylElement,
    ) -> Result<GrClassVector> {
        let eu = self.eta_expand(u)?;
        let ev = self.eta_expand(v)?;
        let prod = self.pontryagin_eta(&eu, &ev)?;
        let bound = prod
            .entries
            .keys()
            .map(|mu| self.group.wall_count(mu) as usize)
            .max()
            .unwrap_or(0);
        let out = self.eta_to_xi(&prod, bound)?;
        for (z, c) in &out.entries {
            if !c.is_polynomial() {
                return Err(Error::NotPolynomial(format!(
                    "coefficient of {} in {} * {}: {}",
                    self.group.format(z),
                    self.group.format(u),
                    self.group.format(v),
                    c
                )));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{RootSystem, TypeLabel};

    fn ring(t: TypeLabel, r: usize) -> GrRing {
        let rs = Arc::new(RootSystem::build(t, r).unwrap());
        GrRing::new(Arc::new(AffineWeylGroup::new(rs)))
    }

    fn elt(g: &AffineWeylGroup, s: &str) -> AffineWeylElement {
        g.parse(s).unwrap()
    }

    fn frac(s: &str, n: usize) -> LinFrac {
        LinFrac::parse(s, n).unwrap()
    }

    #[test]
    fn fixed_points_rank_one() {
        let gr = ring(TypeLabel::A, 1);
        let pts = gr.bsdh_fixed_points(&[0]).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].mu_gamma, CoweightVec::new(vec![0]));
        assert_eq!(pts[0].euler, frac("(-1)/((a1))", 1));
        assert_eq!(pts[1].mu_gamma, CoweightVec::new(vec![1]));
        assert_eq!(pts[1].euler, frac("(1)/((a1))", 1));

        let empty = gr.bsdh_fixed_points(&[]).unwrap();
        assert_eq!(empty.len(), 1);
        assert_eq!(empty[0].euler, LinFrac::one(1));

        let mus: Vec<i64> = gr
            .bsdh_fixed_points(&[1, 0])
            .unwrap()
            .iter()
            .map(|p| p.mu_gamma.coords()[0])
            .collect();
        assert_eq!(mus, vec![0, 1, 0, -1]);
        assert!(matches!(
            gr.bsdh_fixed_points(&[0, 0]),
            Err(Error::NonReducedWord(_))
        ));
    }

    #[test]
    fn eta_expand_examples() {
        let gr = ring(TypeLabel::A, 1);
        let g = gr.group();
        let id = gr.eta_expand(&g.identity()).unwrap();
        assert_eq!(*id, EtaVector::unit(CoweightVec::zeros(1), 1));
        let s0 = gr.eta_expand(&elt(g, "s0")).unwrap();
        assert_eq!(s0.entries.len(), 2);
        assert_eq!(
            s0.get(&CoweightVec::new(vec![1])),
            Some(&frac("(1)/((a1))", 1))
        );
        assert_eq!(
            s0.get(&CoweightVec::new(vec![0])),
            Some(&frac("(-1)/((a1))", 1))
        );
        let t = gr.eta_expand(&elt(g, "w=e;lam=-1")).unwrap();
        assert!(t.entries.keys().all(|m| m.coords()[0].abs() <= 1));
    }

    #[test]
    fn pontryagin_examples() {
        let gr = ring(TypeLabel::A, 1);
        let a = EtaVector::unit(CoweightVec::new(vec![1]), 1);
        assert_eq!(
            gr.pontryagin_eta(&a, &a).unwrap(),
            EtaVector::unit(CoweightVec::new(vec![2]), 1)
        );
        let s0 = gr.eta_expand(&elt(gr.group(), "s0")).unwrap();
        let one = EtaVector::unit(CoweightVec::zeros(1), 1);
        assert_eq!(gr.pontryagin_eta(&one, &s0).unwrap(), *s0);
        let sq = gr.pontryagin_eta(&s0, &s0).unwrap();
        assert_eq!(
            sq.get(&CoweightVec::new(vec![2])),
            Some(&frac("(1)/((a1)^2)", 1))
        );
        assert_eq!(
            sq.get(&CoweightVec::new(vec![1])),
            Some(&frac("(-2)/((a1)^2)", 1))
        );
        assert_eq!(
            sq.get(&CoweightVec::new(vec![0])),
            Some(&frac("(1)/((a1)^2)", 1))
        );
    }

    #[test]
    fn rank_one_products() {
        let gr = ring(TypeLabel::A, 1);
        let g = gr.group();
        let s0 = elt(g, "s0");
        let sq = gr
            .gr_structure_constants(&s0, &s0)
            .unwrap()
            .to_polys()
            .unwrap();
        assert_eq!(sq.len(), 2);
        assert_eq!(sq[&elt(g, "w=e;lam=-1")], Poly::one(1));
        assert_eq!(sq[&elt(g, "w=s1;lam=-2")], Poly::var(1, 0));
        let p = gr
            .gr_structure_constants(&s0, &elt(g, "w=e;lam=-1"))
            .unwrap()
            .to_polys()
            .unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[&elt(g, "w=s1;lam=-2")], Poly::one(1));
        let x = elt(g, "w=s1;lam=-2");
        let unit = gr.gr_structure_constants(&x, &g.identity()).unwrap();
        assert_eq!(unit, GrClassVector::unit(x, 1));
    }

    #[test]
    fn eta_to_xi_round_trip_and_zero() {
        let gr = ring(TypeLabel::A, 2);
        let els = gr.group().enumerate_waf_minus(4).unwrap();
        for (x, len) in &els {
            let e = gr.eta_expand(x).unwrap();
            assert_eq!(
                gr.eta_to_xi(&e, *len).unwrap(),
                GrClassVector::unit(x.clone(), 2)
            );
        }
        assert!(gr.eta_to_xi(&EtaVector::default(), 0).unwrap().is_zero());
    }

    #[test]
    fn eta_to_xi_reports_bound() {
        let gr = ring(TypeLabel::A, 1);
        let e = gr.eta_expand(&elt(gr.group(), "w=e;lam=-1")).unwrap();
        assert!(matches!(
            gr.eta_to_xi(&e, 1),
            Err(Error::ResidualNonzero {
                kind: ResidualKind::BoundExceeded {
                    needed: 2,
                    bound: 1
                },
                ..
            })
        ));
    }

    #[test]
    fn non_minimal_rejected() {
        let gr = ring(TypeLabel::A, 1);
        assert!(matches!(
            gr.eta_expand(&elt(gr.group(), "w=e;lam=1")),
            Err(Error::NotCosetMinimal(_))
        ));
    }
}
