//! The Peterson map from the affine Grassmannian to quantum cohomology, its
//! combinatorial side conditions, and the homomorphism verifier.
//!
//! `xi_{w t_lam}` goes to `q^{lam + Q^vee_P} sigma_{[w]}` when `w t_lam` lies
//! in `(W^P)_af` and to zero otherwise.
//!
//! The auxiliary dominant `b` with `alpha_i(b) = 0` exactly for `i in P` is
//! handled by sign: `alpha(v b)` has the sign of `v^{-1} alpha` outside `R_P`
//! and vanishes on `R_P`.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affweyl::{floor_shifted, AffineWeylElement, AffineWeylGroup};
use crate::error::{Error, Result};
use crate::grring::{GrClassVector, GrRing};
use crate::qhring::{CurveClass, QhRing, QuantumClass};
use crate::rootdata::{CoweightVec, ParabolicType, RootSystem, RootVec, TypeLabel, WeylElement};
use crate::table::{GrTable, QhTable};

/// Root system, affine Weyl group and the Gr-side ring, built once and shared.
#[derive(Debug)]
pub struct Engine {
    rs: Arc<RootSystem>,
    group: Arc<AffineWeylGroup>,
    gr: GrRing,
}

impl Engine {
    pub fn new(t: TypeLabel, rank: usize) -> Result<Self> {
        let rs = Arc::new(RootSystem::build(t, rank)?);
        let group = Arc::new(AffineWeylGroup::new(rs.clone()));
        let gr = GrRing::new(group.clone());
        Ok(Self { rs, group, gr })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn group(&self) -> &AffineWeylGroup {
        &self.group
    }

    pub fn gr(&self) -> &GrRing {
        &self.gr
    }

    pub fn qh(&self, p: &ParabolicType) -> Result<QhRing> {
        QhRing::new(self.rs.clone(), p.clone())
    }
}

/// Sign of `alpha(v b)`.
fn sign_at_b(alpha: &RootVec, v: &WeylElement, p: &ParabolicType) -> i64 {
    let beta = v.inv_act_root(alpha);
    if p.contains_root(&beta) {
        0
    } else if beta.is_positive() {
        1
    } else {
        -1
    }
}

fn parabolic_roots<'a>(
    rs: &'a RootSystem,
    p: &'a ParabolicType,
) -> impl Iterator<Item = &'a RootVec> {
    rs.positive_roots()
        .iter()
        .filter(move |a| p.contains_root(a))
}

/// Membership of `w t_lam` in `(W^P)_af`.
pub fn in_wp_af(rs: &RootSystem, x: &AffineWeylElement, p: &ParabolicType) -> bool {
    parabolic_roots(rs, p).all(|alpha| {
        let m = rs.pair(alpha, &x.lam);
        if x.w.act_root(alpha).is_negative() {
            m == -1
        } else {
            m == 0
        }
    })
}

/// Condition `C(w t_lam)` on the roots of `-w R_P^+`.
pub fn condition_c(rs: &RootSystem, x: &AffineWeylElement, p: &ParabolicType) -> bool {
    let center = x.center();
    parabolic_roots(rs, p).all(|beta| {
        let alpha = x.w.act_root(beta).neg();
        let m = rs.pair(&alpha, &center);
        if alpha.is_positive() {
            m == 1
        } else {
            m == 0
        }
    })
}

/// Image of a single affine Schubert class, `None` when it maps to zero.
pub fn phi_basis(
    rs: &RootSystem,
    x: &AffineWeylElement,
    p: &ParabolicType,
) -> Option<(CurveClass, WeylElement)> {
    in_wp_af(rs, x, p).then(|| {
        (
            crate::qhring::curve_class_project(&x.lam, p),
            rs.min_coset_rep(&x.w, p),
        )
    })
}

/// The Peterson map on a class with polynomial coefficients.
pub fn phi(g: &AffineWeylGroup, c: &GrClassVector, p: &ParabolicType) -> Result<QuantumClass> {
    let mut out = QuantumClass::default();
    for (x, coeff) in &c.entries {
        if !g.is_coset_min(x) {
            return Err(Error::NotCosetMinimal(g.format(x)));
        }
        if let Some((beta, w)) = phi_basis(g.root_system(), x, p) {
            out.add_term(beta, w, coeff.to_poly()?);
        }
    }
    Ok(out)
}

fn phi_polys(
    rs: &RootSystem,
    c: &BTreeMap<AffineWeylElement, crate::exactalg::Poly>,
    p: &ParabolicType,
) -> QuantumClass {
    let mut out = QuantumClass::default();
    for (x, coeff) in c {
        if let Some((beta, w)) = phi_basis(rs, x, p) {
            out.add_term(beta, w, coeff.clone());
        }
    }
    out
}

/// Degrees `-alpha(mu)` over `alpha in -v(R^+ \ R_P^+)`, in root order.
pub fn section_degrees(
    rs: &RootSystem,
    mu: &CoweightVec,
    v: &WeylElement,
    p: &ParabolicType,
) -> Vec<i64> {
    rs.positive_roots()
        .iter()
        .filter(|a| !p.contains_root(a))
        .map(|a| rs.pair(&v.act_root(a), mu))
        .collect()
}

/// `v^{-1}(mu) + Q^vee_P`.
pub fn section_class(mu: &CoweightVec, v: &WeylElement, p: &ParabolicType) -> CurveClass {
    crate::qhring::curve_class_project(&v.inv_act_coweight(mu), p)
}

/// The three length and degree terms for a pair `(w t_lam, v)` and the
/// non-negative summands they add up to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimCount {
    pub length: i64,
    pub length_v: i64,
    pub c1: i64,
    pub total: i64,
    pub summands: Vec<i64>,
}

pub fn dim_count(
    g: &AffineWeylGroup,
    x: &AffineWeylElement,
    v: &WeylElement,
    p: &ParabolicType,
) -> Result<DimCount> {
    let rs = g.root_system();
    if !rs.is_min_rep(v, p) {
        return Err(Error::NotInWP(rs.word_string(v)));
    }
    let length = g.length_minrep(x)? as i64;
    let center = x.center();
    let mut length_v = 0;
    let mut c1 = 0;
    let mut summands = Vec::new();
    for alpha in rs.all_roots() {
        let s = sign_at_b(&alpha, v, p);
        let m = rs.pair(&alpha, &center);
        if s < 0 {
            // floor(alpha(-a)) is -1 on positive roots and 0 on negative ones.
            if alpha.is_positive() {
                length_v += 1;
            }
            c1 -= m;
        }
        let fl = floor_shifted(&alpha, m);
        let above = if alpha.is_positive() { m >= 1 } else { m >= 0 };
        if above {
            let a = -s;
            let b = i64::from(s > 0);
            summands.push((1 - a) * fl + b);
        }
    }
    Ok(DimCount {
        length,
        length_v,
        c1,
        total: length + length_v + c1,
        summands,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub u: String,
    pub v: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub group_type: String,
    pub rank: usize,
    pub parabolic: Vec<usize>,
    pub max_length: usize,
    pub pairs_checked: usize,
    pub condition_checked: usize,
    pub dim_checked: usize,
    pub failures: Vec<Failure>,
    pub timing: BTreeMap<String, f64>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Structure constants for every ordered pair of `els`.
pub fn compute_gr_table(gr: &GrRing, els: &[AffineWeylElement]) -> Result<GrTable> {
    let pairs: Vec<(usize, usize)> = (0..els.len())
        .flat_map(|i| (0..els.len()).map(move |j| (i, j)))
        .collect();
    let rows: Vec<_> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (u, v) = (&els[i], &els[j]);
            let c = gr
                .gr_structure_constants(u, v)
                .and_then(|c| c.to_polys())
                .map_err(|e| Error::AtPair {
                    u: gr.group().format(u),
                    v: gr.group().format(v),
                    source: Box::new(e),
                })?;
            Ok(((u.clone(), v.clone()), c))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().collect())
}

/// Quantum products of every ordered pair in `W^P`.
pub fn compute_qh_table(qh: &QhRing) -> Result<QhTable> {
    let wp = qh.min_reps().to_vec();
    let tables: Vec<_> = wp
        .par_iter()
        .map(|v| Ok((v.clone(), qh.product_table(v)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = QhTable::new();
    for (v, t) in tables {
        for (u, prod) in t.iter() {
            out.insert((u.clone(), v.clone()), prod.clone());
        }
    }
    Ok(out)
}

/// Compares both sides of the homomorphism from precomputed tables and runs
/// the combinatorial sweeps up to `max_length`.
pub fn verify_with_tables(
    engine: &Engine,
    qh: &QhRing,
    max_length: usize,
    gr_table: &GrTable,
    qh_table: &QhTable,
) -> Result<VerifyReport> {
    let g = engine.group();
    let rs = engine.root_system();
    let p = qh.parabolic();
    let els: Vec<AffineWeylElement> = g
        .enumerate_waf_minus(max_length)?
        .into_iter()
        .map(|(x, _)| x)
        .collect();
    let mut timing = BTreeMap::new();

    let t = Instant::now();
    let pairs: Vec<(&AffineWeylElement, &AffineWeylElement)> = els
        .iter()
        .flat_map(|u| els.iter().map(move |v| (u, v)))
        .collect();
    let mut failures: Vec<Failure> = pairs
        .par_iter()
        .filter_map(|&(u, v)| {
            let fail = |detail: String| {
                Some(Failure {
                    u: g.format(u),
                    v: g.format(v),
                    detail,
                })
            };
            let Some(prod) = gr_table.get(&(u.clone(), v.clone())) else {
                return fail("missing from structure-constant table".into());
            };
            let lhs = phi_polys(rs, prod, p);
            let rhs = match (phi_basis(rs, u, p), phi_basis(rs, v, p)) {
                (Some((bu, wu)), Some((bv, wv))) => match qh_table.get(&(wu, wv)) {
                    Some(q) => q.shift(&bu.add(&bv)),
                    None => return fail("missing from quantum product table".into()),
                },
                _ => QuantumClass::default(),
            };
            (lhs != rhs).then(|| Failure {
                u: g.format(u),
                v: g.format(v),
                detail: format!(
                    "phi(product) = {} but product of images = {}",
                    lhs.format(rs),
                    rhs.format(rs)
                ),
            })
        })
        .collect();
    let pairs_checked = pairs.len();
    timing.insert("compare".into(), t.elapsed().as_secs_f64());

    let t = Instant::now();
    let sweep = sweep_properties(g, qh, max_length)?;
    failures.extend(sweep.failures);
    let (condition_checked, dim_checked) = (sweep.condition_checked, sweep.dim_checked);
    timing.insert("sweeps".into(), t.elapsed().as_secs_f64());

    Ok(VerifyReport {
        group_type: rs.type_label().to_string(),
        rank: rs.rank(),
        parabolic: p.labels(),
        max_length,
        pairs_checked,
        condition_checked,
        dim_checked,
        failures,
        timing,
    })
}

/// Outcome of the condition-equivalence and dimension-count sweeps.
#[derive(Debug, Clone, Default)]
pub struct SweepOutcome {
    pub condition_checked: usize,
    pub dim_checked: usize,
    pub failures: Vec<Failure>,
}

/// Checks `condition_c == in_wp_af` on all of `W_af` and every dimension-count
/// property on `W_af^- x W^P`, both up to `max_length`.
pub fn sweep_properties(
    g: &AffineWeylGroup,
    qh: &QhRing,
    max_length: usize,
) -> Result<SweepOutcome> {
    let rs = g.root_system();
    let p = qh.parabolic();
    let mut out = SweepOutcome::default();
    for (x, _) in g.enumerate_all(max_length)? {
        out.condition_checked += 1;
        if condition_c(rs, &x, p) != in_wp_af(rs, &x, p) {
            out.failures.push(Failure {
                u: g.format(&x),
                v: String::new(),
                detail: "condition C disagrees with (W^P)_af membership".into(),
            });
        }
    }
    for (x, _) in g.enumerate_waf_minus(max_length)? {
        for v in qh.min_reps() {
            out.dim_checked += 1;
            if let Some(msg) = check_dim_count(g, &x, v, p)? {
                out.failures.push(Failure {
                    u: g.format(&x),
                    v: rs.word_string(v),
                    detail: msg,
                });
            }
        }
    }
    Ok(out)
}

/// All dimension-count properties of one pair; `Some(message)` on failure.
pub fn check_dim_count(
    g: &AffineWeylGroup,
    x: &AffineWeylElement,
    v: &WeylElement,
    p: &ParabolicType,
) -> Result<Option<String>> {
    let rs = g.root_system();
    let d = dim_count(g, x, v, p)?;
    if d.total < 0 {
        return Ok(Some(format!("negative dimension count {}", d.total)));
    }
    if d.summands.iter().any(|&s| s < 0) {
        return Ok(Some(format!("negative summand in {:?}", d.summands)));
    }
    if d.summands.iter().sum::<i64>() != d.total {
        return Ok(Some(format!(
            "summands {:?} do not add up to {}",
            d.summands, d.total
        )));
    }
    if d.length_v != v.length() as i64 {
        return Ok(Some(format!(
            "length of v by formula {} != {}",
            d.length_v,
            v.length()
        )));
    }
    let center = x.center();
    if section_degrees(rs, &center, v, p).iter().sum::<i64>() != d.c1 {
        return Ok(Some("section degrees do not add up to c1".into()));
    }
    let matches = rs.min_coset_rep(&x.w, p) == *v && condition_c(rs, x, p);
    if (d.total == 0) != matches {
        return Ok(Some(format!(
            "dimension count {} but coset/condition test is {}",
            d.total, matches
        )));
    }
    if matches && section_class(&center, v, p) != crate::qhring::curve_class_project(&x.lam, p) {
        return Ok(Some("section class differs from lam + Q_P".into()));
    }
    Ok(None)
}

/// Computes both tables and verifies the homomorphism up to `max_length`.
pub fn verify_homomorphism(
    engine: &Engine,
    p: &ParabolicType,
    max_length: usize,
) -> Result<VerifyReport> {
    let qh = engine.qh(p)?;
    let els: Vec<AffineWeylElement> = engine
        .group()
        .enumerate_waf_minus(max_length)?
        .into_iter()
        .map(|(x, _)| x)
        .collect();
    let t = Instant::now();
    let gr_table = compute_gr_table(engine.gr(), &els)?;
    let gr_time = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let qh_table = compute_qh_table(&qh)?;
    let qh_time = t.elapsed().as_secs_f64();
    let mut report = verify_with_tables(engine, &qh, max_length, &gr_table, &qh_table)?;
    report.timing.insert("gr".into(), gr_time);
    report.timing.insert("qh".into(), qh_time);
    Ok(report)
}
