//! Equivariant quantum cohomology of `G/P`.
//!
//! Schubert classes are localized with the subword formula over a reduced
//! word of the fixed point, which gives `sigma_v|_v` as the product of the
//! positive roots inverted by `v^{-1}`. Quantum products come from the
//! equivariant quantum Chevalley rule
//!
//! ```text
//! sigma_{s_i} * sigma_v = (omega_i - v omega_i) sigma_v
//!     + sum <omega_i, alpha^vee> sigma_{v s_alpha}            (l(v s_alpha) = l(v) + 1, v s_alpha in W^P)
//!     + sum <omega_i, alpha^vee> q^{d(alpha)} sigma_{[v s_alpha]}  (l([v s_alpha]) = l(v) + 1 - c1(d(alpha)))
//! ```
//!
//! over `alpha in R^+ \ R_P^+`, where `[.]` is the minimal coset
//! representative and `d(alpha)` the projection of `alpha^vee`. Products with
//! longer classes are solved level by level from associativity, with an
//! equivariant solver for the lengths where the divisors alone do not
//! separate the Schubert classes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, ResidualKind, Result};
use crate::exactalg::{LinForm, LinFrac, Poly};
use crate::rootdata::{CoweightVec, ParabolicType, RootSystem, RootVec, WeylElement};

/// Sign of the equivariant Chevalley term; the rank-one check against the
/// localization product pins it.
pub const CHEVALLEY_EQUIVARIANT_SIGN: i64 = 1;

/// An element of `Q^vee / Q^vee_P`, stored on the simple coroots outside `P`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveClass(pub Vec<i64>);

impl CurveClass {
    pub fn zero(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Drops the coordinates of `lam` indexed by the parabolic.
pub fn curve_class_project(lam: &CoweightVec, p: &ParabolicType) -> CurveClass {
    CurveClass(
        lam.coords()
            .iter()
            .enumerate()
            .filter(|(i, _)| !p.contains(*i))
            .map(|(_, &c)| c)
            .collect(),
    )
}

/// Lift of a curve class with zeros on the parabolic coordinates.
pub fn curve_class_lift(beta: &CurveClass, p: &ParabolicType, rank: usize) -> CoweightVec {
    let mut out = vec![0; rank];
    for (k, i) in p.complement(rank).into_iter().enumerate() {
        out[i] = beta.0[k];
    }
    CoweightVec::new(out)
}

/// `int_beta c_1(T G/P)`: the sum of `alpha(lift)` over `alpha in R^+ \ R_P^+`.
pub fn c1_pairing(rs: &RootSystem, beta: &CurveClass, p: &ParabolicType) -> i64 {
    c1_of_lift(rs, &curve_class_lift(beta, p, rs.rank()), p)
}

pub(crate) fn c1_of_lift(rs: &RootSystem, lam: &CoweightVec, p: &ParabolicType) -> i64 {
    rs.positive_roots()
        .iter()
        .filter(|a| !p.contains_root(a))
        .map(|a| rs.pair(a, lam))
        .sum()
}

/// Sparse sum of `coeff * q^beta * sigma_w`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuantumClass {
    pub entries: BTreeMap<(CurveClass, WeylElement), Poly>,
}

impl QuantumClass {
    pub fn basis(beta: CurveClass, w: WeylElement, nvars: usize) -> Self {
        let mut q = Self::default();
        q.add_term(beta, w, Poly::one(nvars));
        q
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_term(&mut self, beta: CurveClass, w: WeylElement, c: Poly) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry((beta, w)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &QuantumClass, c: &Poly, shift: Option<&CurveClass>) {
        for ((b, w), x) in &other.entries {
            let beta = match shift {
                Some(s) => b.add(s),
                None => b.clone(),
            };
            self.add_term(beta, w.clone(), x.mul(c));
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &QuantumClass) -> QuantumClass {
        let mut out = self.clone();
        for ((b, w), c) in &other.entries {
            out.add_term(b.clone(), w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Poly) -> QuantumClass {
        let mut out = QuantumClass::default();
        out.add_scaled(self, c, None);
        out
    }

    /// Multiplies every term by `q^beta`.
    pub fn shift(&self, beta: &CurveClass) -> QuantumClass {
        QuantumClass {
            entries: self
                .entries
                .iter()
                .map(|((b, w), c)| ((b.add(beta), w.clone()), c.clone()))
                .collect(),
        }
    }

    /// Value at `a = 0`.
    pub fn specialize_zero(&self) -> QuantumClass {
        let mut out = QuantumClass::default();
        for ((b, w), c) in &self.entries {
            out.add_term(
                b.clone(),
                w.clone(),
                Poly::constant(c.nvars(), c.specialize_zero()),
            );
        }
        out
    }

    fn exact_div_int(&self, d: &BigInt) -> Option<QuantumClass> {
        let mut out = QuantumClass::default();
        for ((b, w), c) in &self.entries {
            out.add_term(b.clone(), w.clone(), c.exact_div_int(d)?);
        }
        Some(out)
    }

    pub fn format(&self, rs: &RootSystem) -> String {
        if self.entries.is_empty() {
            return "0".into();
        }
        self.entries
            .iter()
            .map(|((b, w), c)| format!("({c})*q^{b}*[{}]", rs.word_string(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// One term of a Chevalley expansion of a basis class.
#[derive(Debug, Clone)]
struct ChevTerm {
    beta: CurveClass,
    w: WeylElement,
    coeff: Poly,
    /// Classical term one level up, with integer coefficient.
    classical: bool,
}

/// Products in `QH_T(G/P)` for one root system and parabolic.
#[derive(Debug)]
pub struct QhRing {
    rs: Arc<RootSystem>,
    p: ParabolicType,
    wp: Vec<WeylElement>,
    index: HashMap<WeylElement, usize>,
    loc: Vec<Vec<Poly>>,
    chev: HashMap<(usize, usize), Vec<ChevTerm>>,
    tables: RwLock<HashMap<WeylElement, Arc<BTreeMap<WeylElement, QuantumClass>>>>,
}

impl QhRing {
    pub fn new(rs: Arc<RootSystem>, p: ParabolicType) -> Result<Self> {
        for i in p.indices() {
            if i >= rs.rank() {
                return Err(Error::IndexOutOfRange {
                    index: i + 1,
                    rank: rs.rank(),
                });
            }
        }
        let wp = rs.enumerate_weyl(&p).min_reps;
        let index = wp.iter().enumerate().map(|(k, w)| (w.clone(), k)).collect();
        let mut ring = Self {
            rs,
            p,
            wp,
            index,
            loc: Vec::new(),
            chev: HashMap::new(),
            tables: RwLock::new(HashMap::new()),
        };
        ring.loc = ring
            .wp
            .iter()
            .map(|v| ring.wp.iter().map(|u| ring.billey(v, u)).collect())
            .collect();
        for i in ring.p.complement(ring.rs.rank()) {
            for k in 0..ring.wp.len() {
                let terms = ring.chevalley_terms(i, k);
                ring.chev.insert((i, k), terms);
            }
        }
        Ok(ring)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn parabolic(&self) -> &ParabolicType {
        &self.p
    }

    /// `W^P`, sorted by length then reduced word.
    pub fn min_reps(&self) -> &[WeylElement] {
        &self.wp
    }

    fn nvars(&self) -> usize {
        self.rs.rank()
    }

    fn idx(&self, w: &WeylElement) -> Result<usize> {
        self.index
            .get(w)
            .copied()
            .ok_or_else(|| Error::NotInWP(self.rs.word_string(w)))
    }

    pub fn zero_class(&self) -> CurveClass {
        CurveClass::zero(self.rs.rank() - self.p.len())
    }

    pub fn project(&self, lam: &CoweightVec) -> CurveClass {
        curve_class_project(lam, &self.p)
    }

    pub fn c1(&self, beta: &CurveClass) -> i64 {
        c1_pairing(&self.rs, beta, &self.p)
    }

    /// Subword formula for `sigma_v|_{y_u}`.
    fn billey(&self, v: &WeylElement, u: &WeylElement) -> Poly {
        let rs = &*self.rs;
        let word = rs.reduced_word(u);
        let mut roots = Vec::with_capacity(word.len());
        let mut prefix = rs.identity();
        for &l in &word {
            roots.push(Poly::linear(
                prefix.act_root(&rs.simple_root(l - 1)).coords(),
            ));
            prefix = rs.compose(&prefix, &rs.simple_reflection(l - 1));
        }
        let mut total = Poly::zero(self.nvars());
        let need = v.length();
        fn rec(
            rs: &RootSystem,
            word: &[usize],
            roots: &[Poly],
            v: &WeylElement,
            need: usize,
            start: usize,
            prod: &WeylElement,
            acc: &Poly,
            total: &mut Poly,
        ) {
            if need == 0 {
                if prod == v {
                    *total = total.add(acc);
                }
                return;
            }
            for j in start..=word.len() - need {
                let next = rs.compose(prod, &rs.simple_reflection(word[j] - 1));
                if next.length() != prod.length() + 1 {
                    continue;
                }
                rec(
                    rs,
                    word,
                    roots,
                    v,
                    need - 1,
                    j + 1,
                    &next,
                    &acc.mul(&roots[j]),
                    total,
                );
            }
        }
        if need <= word.len() {
            rec(
                rs,
                &word,
                &roots,
                v,
                need,
                0,
                &rs.identity(),
                &Poly::one(self.nvars()),
                &mut total,
            );
        }
        total
    }

    /// `sigma_v|_{y_u}` for `u, v in W^P`.
    pub fn schubert_localization(&self, v: &WeylElement, u: &WeylElement) -> Result<Poly> {
        Ok(self.loc[self.idx(v)?][self.idx(u)?].clone())
    }

    /// The positive roots `beta` with `u^{-1} beta < 0`.
    fn inversion_forms(&self, u: &WeylElement) -> Vec<LinForm> {
        self.rs
            .positive_roots()
            .iter()
            .filter(|b| u.inv_act_root(b).is_negative())
            .map(|b| LinForm::new(b.coords().to_vec()).expect("root").0)
            .collect()
    }

    /// Classical product by pointwise multiplication and triangular solve.
    pub fn gkm_classical_product(
        &self,
        u: &WeylElement,
        v: &WeylElement,
    ) -> Result<BTreeMap<WeylElement, Poly>> {
        let (iu, iv) = (self.idx(u)?, self.idx(v)?);
        let n = self.wp.len();
        let mut coeffs: Vec<Poly> = vec![Poly::zero(self.nvars()); n];
        // wp is sorted by length, so each point only sees classes already solved.
        for k in 0..n {
            let mut r = self.loc[iu][k].mul(&self.loc[iv][k]);
            for j in 0..k {
                if !coeffs[j].is_zero() {
                    r = r.sub(&coeffs[j].mul(&self.loc[j][k]));
                }
            }
            for f in self.inversion_forms(&self.wp[k]) {
                r = r
                    .exact_div_linear(&f)
                    .ok_or_else(|| Error::ResidualNonzero {
                        kind: ResidualKind::Inconsistent,
                        detail: format!(
                            "localization product not divisible at {}",
                            self.rs.word_string(&self.wp[k])
                        ),
                    })?;
            }
            coeffs[k] = r;
        }
        Ok(self
            .wp
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| (w.clone(), c))
            .collect())
    }

    fn chevalley_terms(&self, i: usize, k: usize) -> Vec<ChevTerm> {
        let rs = &*self.rs;
        let n = self.nvars();
        let v = &self.wp[k];
        let mut out = Vec::new();
        let eq = Poly::linear(rs.omega_minus_v_omega(i, v).coords())
            .scale(&BigInt::from(CHEVALLEY_EQUIVARIANT_SIGN));
        out.push(ChevTerm {
            beta: self.zero_class(),
            w: v.clone(),
            coeff: eq,
            classical: false,
        });
        for (alpha, coroot) in rs.positive_roots().iter().zip(rs.positive_coroots()) {
            if self.p.contains_root(alpha) {
                continue;
            }
            let m = coroot.coords()[i];
            if m == 0 {
                continue;
            }
            let vs = rs.compose(v, &rs.reflection(alpha).expect("root"));
            let coeff = Poly::constant(n, m);
            if rs.is_min_rep(&vs, &self.p) && vs.length() == v.length() + 1 {
                out.push(ChevTerm {
                    beta: self.zero_class(),
                    w: vs,
                    coeff,
                    classical: true,
                });
                continue;
            }
            let d = self.project(coroot);
            let target = rs.min_coset_rep(&vs, &self.p);
            if target.length() as i64 == v.length() as i64 + 1 - self.c1(&d) {
                out.push(ChevTerm {
                    beta: d,
                    w: target,
                    coeff,
                    classical: false,
                });
            }
        }
        out
    }

    /// Quantum multiplication by the divisor class `sigma_{s_i}`, 0-based `i`.
    pub fn chevalley(&self, i: usize, c: &QuantumClass) -> Result<QuantumClass> {
        if i >= self.rs.rank() {
            return Err(Error::IndexOutOfRange {
                index: i + 1,
                rank: self.rs.rank(),
            });
        }
        if self.p.contains(i) {
            return Err(Error::IndexInParabolic(i + 1));
        }
        let mut out = QuantumClass::default();
        for ((b, w), x) in &c.entries {
            let k = self.idx(w)?;
            for t in &self.chev[&(i, k)] {
                out.add_term(b.add(&t.beta), t.w.clone(), x.mul(&t.coeff));
            }
        }
        Ok(out)
    }

    /// `sigma_u * sigma_v`.
    pub fn quantum_product(&self, u: &WeylElement, v: &WeylElement) -> Result<QuantumClass> {
        self.idx(u)?;
        let table = self.product_table(v)?;
        Ok(table[u].clone())
    }

    /// `sigma_u * sigma_v` for every `u in W^P`, memoized per `v`.
    ///
    /// With `X_u = sigma_u * sigma_v`, associativity gives for each `u'` of
    /// length `k` and each divisor `i` the relation
    /// `sum_w m_w X_w = sigma_{s_i} * X_{u'} - (other Chevalley terms) * X`,
    /// where `w` runs over length `k + 1`. The integer system is solved
    /// exactly and the unused rows are checked.
    ///
    /// When the divisors do not separate the classes of some length the
    /// integer system is singular and the equivariant solver takes over.
    pub fn product_table(
        &self,
        v: &WeylElement,
    ) -> Result<Arc<BTreeMap<WeylElement, QuantumClass>>> {
        if let Some(t) = self.tables.read().expect("qh cache").get(v) {
            return Ok(t.clone());
        }
        let table = match self.product_table_levelwise(v) {
            Err(Error::RecursionStuck { .. }) => self.product_table_equivariant(v)?,
            other => other?,
        };
        let table = Arc::new(table);
        self.tables
            .write()
            .expect("qh cache")
            .entry(v.clone())
            .or_insert_with(|| table.clone());
        Ok(table)
    }

    fn product_table_levelwise(
        &self,
        v: &WeylElement,
    ) -> Result<BTreeMap<WeylElement, QuantumClass>> {
        let iv = self.idx(v)?;
        let n = self.nvars();
        let mut x: Vec<Option<QuantumClass>> = vec![None; self.wp.len()];
        x[0] = Some(QuantumClass::basis(
            self.zero_class(),
            self.wp[iv].clone(),
            n,
        ));
        let max_len = self.wp.last().map(|w| w.length()).unwrap_or(0);
        let divisors = self.p.complement(self.rs.rank());
        for level in 1..=max_len {
            let cols: Vec<usize> = (0..self.wp.len())
                .filter(|&k| self.wp[k].length() == level)
                .collect();
            let col_pos: HashMap<usize, usize> =
                cols.iter().enumerate().map(|(a, &b)| (b, a)).collect();
            let mut rows: Vec<Vec<i64>> = Vec::new();
            let mut rhs: Vec<QuantumClass> = Vec::new();
            for k in (0..self.wp.len()).filter(|&k| self.wp[k].length() == level - 1) {
                let xk = x[k].as_ref().expect("lower level solved");
                for &i in &divisors {
                    let mut row = vec![0i64; cols.len()];
                    let mut r = self.chevalley(i, xk)?;
                    for t in &self.chev[&(i, k)] {
                        if t.classical {
                            let m = t.coeff.specialize_zero();
                            row[col_pos[&self.idx(&t.w)?]] +=
                                i64::try_from(m).expect("small Chevalley coefficient");
                        } else {
                            let xw = x[self.idx(&t.w)?].as_ref().expect("lower level solved");
                            r.add_scaled(xw, &t.coeff.neg(), Some(&t.beta));
                        }
                    }
                    rows.push(row);
                    rhs.push(r);
                }
            }
            let solved = solve_integer_system(&rows, &rhs, level, n)?;
            for (c, val) in cols.iter().zip(solved) {
                x[*c] = Some(val);
            }
        }
        Ok(self
            .wp
            .iter()
            .cloned()
            .zip(x.into_iter().map(|c| c.expect("all levels solved")))
            .collect())
    }

    /// Effective curve classes with first Chern number at most `bound`.
    fn effective_classes(&self, bound: i64) -> Vec<CurveClass> {
        // Each simple coroot outside the parabolic has positive first Chern number.
        let m = self.zero_class().0.len();
        let mut out = vec![self.zero_class()];
        for j in 0..m {
            let mut next = Vec::new();
            for d in &out {
                let mut d = d.clone();
                while self.c1(&d) <= bound {
                    next.push(d.clone());
                    d.0[j] += 1;
                }
            }
            out = next;
        }
        out
    }

    /// `sigma_u * sigma_v` for every `u in W^P` from the equivariant form of
    /// the recursion, independent of [`QhRing::product_table`].
    ///
    /// Reading off the coefficient `x_u` of `q^d sigma_w` in
    /// `sigma_u * sigma_v` from associativity with each divisor gives
    /// `(c_i(w) - c_i(u)) x_u = sum m x_{u'} + (terms of lower degree)`,
    /// where `c_i` is the equivariant Chevalley coefficient and `u'` runs over
    /// the classical covers of `u`. Coefficients are solved in increasing
    /// `l(w) + c1(d)`. Within one coefficient `u` runs by decreasing length,
    /// which leaves `x_w` as the only free value; `x_e` is known from
    /// `sigma_e * sigma_v = sigma_v` and fixes it.
    pub fn product_table_equivariant(
        &self,
        v: &WeylElement,
    ) -> Result<BTreeMap<WeylElement, QuantumClass>> {
        let iv = self.idx(v)?;
        let n = self.nvars();
        let size = self.wp.len();
        let divisors = self.p.complement(self.rs.rank());
        let top = self.wp.last().map(|w| w.length()).unwrap_or(0);
        let max_level = (top + v.length()) as i64;
        let level = |b: &CurveClass, w: &WeylElement| w.length() as i64 + self.c1(b);
        let diag = |i: usize, k: usize| &self.chev[&(i, k)][0].coeff;

        let mut targets: BTreeMap<i64, Vec<(CurveClass, usize)>> = BTreeMap::new();
        for d in self.effective_classes(max_level) {
            for (k, w) in self.wp.iter().enumerate() {
                let l = level(&d, w);
                if l <= max_level {
                    targets.entry(l).or_default().push((d.clone(), k));
                }
            }
        }
        let restrict = |c: &QuantumClass, l: i64| -> QuantumClass {
            QuantumClass {
                entries: c
                    .entries
                    .iter()
                    .filter(|((b, w), _)| level(b, w) == l)
                    .map(|(k, c)| (k.clone(), c.clone()))
                    .collect(),
            }
        };

        let mut x = vec![QuantumClass::default(); size];
        for (&lvl, keys) in &targets {
            // Known part of each relation at this level, per (u, i).
            let mut known: HashMap<(usize, usize), QuantumClass> = HashMap::new();
            for u in 0..size {
                let below = restrict(&x[u], lvl - 1);
                for &i in &divisors {
                    let mut r = QuantumClass::default();
                    for ((b, w), c) in &below.entries {
                        for t in &self.chev[&(i, self.idx(w)?)][1..] {
                            r.add_term(b.add(&t.beta), t.w.clone(), c.mul(&t.coeff).neg());
                        }
                    }
                    for t in self.chev[&(i, u)][1..].iter().filter(|t| !t.classical) {
                        let shifted = x[self.idx(&t.w)?].shift(&t.beta);
                        r.add_scaled(&restrict(&shifted, lvl), &t.coeff, None);
                    }
                    known.insert((u, i), r);
                }
            }
            for (d, kw) in keys {
                let w = &self.wp[*kw];
                let key = (d.clone(), w.clone());
                // Each value is a + b * x_w.
                let mut vals: Vec<(LinFrac, LinFrac)> =
                    vec![(LinFrac::zero(n), LinFrac::zero(n)); size];
                let mut relation_at_e = None;
                for u in (0..size).rev() {
                    if u == *kw {
                        vals[u] = (LinFrac::zero(n), LinFrac::one(n));
                        continue;
                    }
                    let i = *divisors
                        .iter()
                        .find(|&&i| diag(i, *kw) != diag(i, u))
                        .expect("distinct cosets are separated by a divisor");
                    let mut a = LinFrac::from_poly(
                        known[&(u, i)]
                            .entries
                            .get(&key)
                            .cloned()
                            .unwrap_or_else(|| Poly::zero(n)),
                    );
                    let mut b = LinFrac::zero(n);
                    for t in self.chev[&(i, u)].iter().filter(|t| t.classical) {
                        let (ta, tb) = &vals[self.idx(&t.w)?];
                        a = a.add(&ta.mul_poly(&t.coeff));
                        b = b.add(&tb.mul_poly(&t.coeff));
                    }
                    let lin = diag(i, *kw).sub(diag(i, u));
                    let coords: Vec<i64> = (0..n)
                        .map(|j| {
                            let mut e = vec![0u32; n];
                            e[j] = 1;
                            lin.terms()
                                .find(|(te, _)| **te == e)
                                .map(|(_, c)| i64::try_from(c).expect("small root coordinate"))
                                .unwrap_or(0)
                        })
                        .collect();
                    let inv = LinFrac::reciprocal_of_product(n, 1, &[coords])?;
                    if u == 0 {
                        relation_at_e = Some((a.mul(&inv), b.mul(&inv)));
                    }
                    vals[u] = (a.mul(&inv), b.mul(&inv));
                }
                let expected = if *kw == iv && d.is_zero() {
                    Poly::one(n)
                } else {
                    Poly::zero(n)
                };
                let free = if *kw == 0 {
                    expected
                } else if (w.length() + v.length()) as i64 - lvl < 0 {
                    Poly::zero(n)
                } else {
                    let (a, b) = relation_at_e.expect("identity is processed");
                    // Solve a + b t = expected for the polynomial t.
                    let lhs = expected
                        .mul(&a.denominator_poly())
                        .sub(a.numerator())
                        .mul(&b.denominator_poly());
                    let rhs = a.denominator_poly().mul(b.numerator());
                    if rhs.is_zero() {
                        return Err(Error::RecursionStuck { length: w.length() });
                    }
                    lhs.exact_div(&rhs).ok_or_else(|| {
                        Error::NotPolynomial(format!(
                            "coefficient of q^{d} {} in the product table of {}",
                            self.rs.word_string(w),
                            self.rs.word_string(v)
                        ))
                    })?
                };
                for (u, (a, b)) in vals.iter().enumerate() {
                    let c = a.add(&b.mul_poly(&free)).to_poly()?;
                    x[u].add_term(d.clone(), w.clone(), c);
                }
            }
        }
        for u in 0..size {
            for &i in &divisors {
                let lhs = self.chevalley(i, &x[u])?;
                let mut rhs = QuantumClass::default();
                for t in &self.chev[&(i, u)] {
                    rhs.add_scaled(&x[self.idx(&t.w)?], &t.coeff, Some(&t.beta));
                }
                if lhs != rhs {
                    return Err(Error::ResidualNonzero {
                        kind: ResidualKind::Inconsistent,
                        detail: format!(
                            "associativity with divisor {} at {}",
                            i + 1,
                            self.rs.word_string(&self.wp[u])
                        ),
                    });
                }
            }
        }
        if x[0] != QuantumClass::basis(self.zero_class(), v.clone(), n) {
            return Err(Error::ResidualNonzero {
                kind: ResidualKind::Inconsistent,
                detail: "identity row differs from sigma_v".into(),
            });
        }
        Ok(self.wp.iter().cloned().zip(x).collect())
    }

    /// Curve class of the projected coroot of `alpha`.
    pub fn curve_of_root(&self, alpha: &RootVec) -> Option<CurveClass> {
        self.rs.coroot(alpha).map(|c| self.project(&c))
    }
}

/// Solves `rows * X = rhs` for `X`, one unknown per column.
fn solve_integer_system(
    rows: &[Vec<i64>],
    rhs: &[QuantumClass],
    level: usize,
    nvars: usize,
) -> Result<Vec<QuantumClass>> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    if ncols == 0 {
        return Ok(Vec::new());
    }
    // Greedy choice of independent rows by rational elimination.
    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    for (ri, row) in rows.iter().enumerate() {
        let mut r: Vec<BigRational> = row
            .iter()
            .map(|&a| BigRational::from_integer(a.into()))
            .collect();
        for (b, &pc) in basis.iter().zip(&pivots) {
            if !r[pc].is_zero() {
                let f = r[pc].clone() / b[pc].clone();
                for (x, y) in r.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(pc) = r.iter().position(|a| !a.is_zero()) {
            basis.push(r);
            pivots.push(pc);
            chosen.push(ri);
            if chosen.len() == ncols {
                break;
            }
        }
    }
    if chosen.len() < ncols {
        return Err(Error::RecursionStuck { length: level });
    }
    // Invert the chosen square block over the rationals.
    let n = ncols;
    let mut a: Vec<Vec<BigRational>> = chosen
        .iter()
        .map(|&ri| {
            rows[ri]
                .iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&r| !a[r][c].is_zero())
            .expect("independent rows");
        a.swap(c, p);
        inv.swap(c, p);
        let piv = a[c][c].clone();
        for j in 0..n {
            a[c][j] = &a[c][j] / &piv;
            inv[c][j] = &inv[c][j] / &piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..n {
                    let (arj, irj) = (&a[c][j] * &f, &inv[c][j] * &f);
                    a[r][j] -= arj;
                    inv[r][j] -= irj;
                }
            }
        }
    }
    let den = inv
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut out = Vec::with_capacity(n);
    for row in &inv {
        let mut acc = QuantumClass::default();
        for (k, q) in row.iter().enumerate() {
            let c = (q * BigRational::from_integer(den.clone())).to_integer();
            if !c.is_zero() {
                acc.add_scaled(&rhs[chosen[k]], &Poly::constant(nvars, c), None);
            }
        }
        out.push(acc.exact_div_int(&den).ok_or_else(|| {
            Error::NotPolynomial(format!("quantum product at length {level} not integral"))
        })?);
    }
    // The remaining rows must hold as well.
    for (ri, row) in rows.iter().enumerate() {
        let mut lhs = QuantumClass::default();
        for (c, &m) in row.iter().enumerate() {
            if m != 0 {
                lhs.add_scaled(&out[c], &Poly::constant(nvars, m), None);
            }
        }
        if lhs != rhs[ri] {
            return Err(Error::ResidualNonzero {
                kind: ResidualKind::Inconsistent,
                detail: format!("associativity row {ri} fails at length {level}"),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::TypeLabel;

    fn ring(t: TypeLabel, r: usize, labels: &[usize]) -> QhRing {
        let rs = Arc::new(RootSystem::build(t, r).unwrap());
        let p = ParabolicType::from_labels(r, labels).unwrap();
        QhRing::new(rs, p).unwrap()
    }

    fn w(q: &QhRing, s: &str) -> WeylElement {
        q.root_system().parse_word(s).unwrap()
    }

    fn poly(s: &str, n: usize) -> Poly {
        Poly::parse(s, n).unwrap()
    }

    #[test]
    fn curve_projection() {
        let p = ParabolicType::from_labels(2, &[2]).unwrap();
        assert_eq!(
            curve_class_project(&CoweightVec::new(vec![1, 1]), &p),
            CurveClass(vec![1])
        );
        assert_eq!(
            curve_class_project(&CoweightVec::new(vec![0, 1]), &p),
            CurveClass(vec![0])
        );
        assert_eq!(
            curve_class_project(&CoweightVec::new(vec![3, -2]), &ParabolicType::borel()),
            CurveClass(vec![3, -2])
        );
    }

    #[test]
    fn c1_examples() {
        let a1 = RootSystem::build(TypeLabel::A, 1).unwrap();
        let a2 = RootSystem::build(TypeLabel::A, 2).unwrap();
        let borel = ParabolicType::borel();
        assert_eq!(c1_pairing(&a1, &CurveClass(vec![1]), &borel), 2);
        assert_eq!(c1_pairing(&a2, &CurveClass(vec![1, 0]), &borel), 2);
        let p = ParabolicType::from_labels(2, &[2]).unwrap();
        assert_eq!(c1_pairing(&a2, &CurveClass(vec![1]), &p), 3);
    }

    #[test]
    fn rank_one_localization() {
        let q = ring(TypeLabel::A, 1, &[]);
        let (e, s) = (w(&q, "e"), w(&q, "s1"));
        assert_eq!(q.schubert_localization(&s, &s).unwrap(), poly("a1", 1));
        assert!(q.schubert_localization(&s, &e).unwrap().is_zero());
        assert_eq!(q.schubert_localization(&e, &s).unwrap(), Poly::one(1));
    }

    #[test]
    fn a2_classical_products() {
        let q = ring(TypeLabel::A, 2, &[]);
        let (s1, s2) = (w(&q, "s1"), w(&q, "s2"));
        let p = q.gkm_classical_product(&s1, &s2).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[&w(&q, "s1*s2")], Poly::one(2));
        assert_eq!(p[&w(&q, "s2*s1")], Poly::one(2));
        let p = q.gkm_classical_product(&s1, &s1).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[&s1], poly("a1", 2));
        assert_eq!(p[&w(&q, "s2*s1")], Poly::one(2));
        let x = w(&q, "s1*s2*s1");
        let p = q.gkm_classical_product(&w(&q, "e"), &x).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[&x], Poly::one(2));
    }

    #[test]
    fn chevalley_examples() {
        let q = ring(TypeLabel::A, 1, &[]);
        let s = w(&q, "s1");
        let c = q
            .chevalley(0, &QuantumClass::basis(q.zero_class(), s.clone(), 1))
            .unwrap();
        let mut expect = QuantumClass::default();
        expect.add_term(CurveClass(vec![0]), s.clone(), poly("a1", 1));
        expect.add_term(CurveClass(vec![1]), w(&q, "e"), Poly::one(1));
        assert_eq!(c, expect);
        let unit = q
            .chevalley(0, &QuantumClass::basis(q.zero_class(), w(&q, "e"), 1))
            .unwrap();
        assert_eq!(unit, QuantumClass::basis(q.zero_class(), s, 1));

        let p2 = ring(TypeLabel::A, 2, &[2]);
        let pt = w(&p2, "s2*s1");
        let c = p2
            .chevalley(0, &QuantumClass::basis(p2.zero_class(), pt.clone(), 2))
            .unwrap();
        let mut expect = QuantumClass::default();
        expect.add_term(CurveClass(vec![0]), pt, poly("a1 + a2", 2));
        expect.add_term(CurveClass(vec![1]), w(&p2, "e"), Poly::one(2));
        assert_eq!(c, expect);
        assert!(matches!(
            p2.chevalley(1, &QuantumClass::default()),
            Err(Error::IndexInParabolic(2))
        ));
    }

    #[test]
    fn chevalley_sign_matches_localization_in_rank_one() {
        let q = ring(TypeLabel::A, 1, &[]);
        let s = w(&q, "s1");
        let classical = q.gkm_classical_product(&s, &s).unwrap();
        let quantum = q.quantum_product(&s, &s).unwrap();
        assert_eq!(
            quantum.entries[&(CurveClass(vec![0]), s.clone())],
            classical[&s]
        );
    }

    #[test]
    fn quantum_products() {
        let q = ring(TypeLabel::A, 1, &[]);
        let (e, s) = (w(&q, "e"), w(&q, "s1"));
        let p = q.quantum_product(&s, &s).unwrap();
        let mut expect = QuantumClass::default();
        expect.add_term(CurveClass(vec![0]), s.clone(), poly("a1", 1));
        expect.add_term(CurveClass(vec![1]), e.clone(), Poly::one(1));
        assert_eq!(p, expect);
        assert_eq!(
            q.quantum_product(&e, &s).unwrap(),
            QuantumClass::basis(CurveClass(vec![0]), s, 1)
        );

        let p2 = ring(TypeLabel::A, 2, &[2]);
        let prod = p2
            .quantum_product(&w(&p2, "s1"), &w(&p2, "s2*s1"))
            .unwrap()
            .specialize_zero();
        assert_eq!(
            prod,
            QuantumClass::basis(CurveClass(vec![1]), w(&p2, "e"), 2)
        );
    }

    #[test]
    fn not_in_wp_rejected() {
        let q = ring(TypeLabel::A, 2, &[2]);
        assert!(matches!(
            q.schubert_localization(&w(&q, "s2"), &w(&q, "e")),
            Err(Error::NotInWP(_))
        ));
    }
}
