//! Structure-constant tables and their JSON form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::affweyl::{AffineWeylElement, AffineWeylGroup};
use crate::error::{Error, Result};
use crate::exactalg::Poly;
use crate::qhring::{CurveClass, QuantumClass};
use crate::rootdata::{ParabolicType, RootSystem, WeylElement};

pub const SCHEMA_VERSION: u32 = 1;

/// Sign conventions baked into every table.
pub const CONVENTION_FINGERPRINT: &str =
    "bs-weights:alpha_i,-theta;eq-chevalley:+1;localization:subword-untwisted;s0:t_theta_vee*s_theta";

/// `xi_u * xi_v = sum c_z xi_z`, keyed by `(u, v)`.
pub type GrTable =
    BTreeMap<(AffineWeylElement, AffineWeylElement), BTreeMap<AffineWeylElement, Poly>>;

/// `sigma_u * sigma_v`, keyed by `(u, v)`.
pub type QhTable = BTreeMap<(WeylElement, WeylElement), QuantumClass>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableHeader {
    pub schema_version: u32,
    pub group_type: String,
    pub rank: usize,
    pub parabolic: Vec<usize>,
    pub basis: String,
    pub max_length: usize,
    pub fingerprint: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub u: String,
    pub v: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub z: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub w: Option<String>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableFile {
    pub header: TableHeader,
    pub rows: Vec<TableRow>,
}

fn header(rs: &RootSystem, p: &ParabolicType, basis: &str, max_length: usize) -> TableHeader {
    TableHeader {
        schema_version: SCHEMA_VERSION,
        group_type: rs.type_label().to_string(),
        rank: rs.rank(),
        parabolic: p.labels(),
        basis: basis.into(),
        max_length,
        fingerprint: CONVENTION_FINGERPRINT.into(),
    }
}

fn non_equivariant(c: &Poly, flag: bool) -> Poly {
    if flag {
        Poly::constant(c.nvars(), c.specialize_zero())
    } else {
        c.clone()
    }
}

impl TableFile {
    pub fn from_gr(g: &AffineWeylGroup, table: &GrTable, max_length: usize, non_eq: bool) -> Self {
        let mut rows = Vec::new();
        for ((u, v), prod) in table {
            for (z, c) in prod {
                let c = non_equivariant(c, non_eq);
                if c.is_zero() {
                    continue;
                }
                rows.push(TableRow {
                    u: g.format(u),
                    v: g.format(v),
                    z: Some(g.format(z)),
                    beta: None,
                    w: None,
                    coeff: c.to_string(),
                });
            }
        }
        Self {
            header: header(g.root_system(), &ParabolicType::borel(), "xi", max_length),
            rows,
        }
    }

    pub fn from_qh(
        rs: &RootSystem,
        p: &ParabolicType,
        table: &QhTable,
        max_length: usize,
        non_eq: bool,
    ) -> Self {
        let mut rows = Vec::new();
        for ((u, v), prod) in table {
            for ((beta, w), c) in &prod.entries {
                let c = non_equivariant(c, non_eq);
                if c.is_zero() {
                    continue;
                }
                rows.push(TableRow {
                    u: rs.word_string(u),
                    v: rs.word_string(v),
                    z: None,
                    beta: Some(beta.coords().to_vec()),
                    w: Some(rs.word_string(w)),
                    coeff: c.to_string(),
                });
            }
        }
        Self {
            header: header(rs, p, "qh", max_length),
            rows,
        }
    }

    pub fn to_gr(&self, g: &AffineWeylGroup) -> Result<GrTable> {
        self.check(g.root_system(), "xi")?;
        let n = g.rank();
        let mut out = GrTable::new();
        for row in &self.rows {
            let z = row
                .z
                .as_deref()
                .ok_or_else(|| Error::Parse("gr row without z".into()))?;
            out.entry((g.parse(&row.u)?, g.parse(&row.v)?))
                .or_default()
                .insert(g.parse(z)?, Poly::parse(&row.coeff, n)?);
        }
        Ok(out)
    }

    pub fn to_qh(&self, rs: &RootSystem) -> Result<QhTable> {
        self.check(rs, "qh")?;
        let n = rs.rank();
        let mut out = QhTable::new();
        for row in &self.rows {
            let (Some(beta), Some(w)) = (&row.beta, &row.w) else {
                return Err(Error::Parse("qh row without beta or w".into()));
            };
            out.entry((rs.parse_word(&row.u)?, rs.parse_word(&row.v)?))
                .or_default()
                .add_term(
                    CurveClass(beta.clone()),
                    rs.parse_word(w)?,
                    Poly::parse(&row.coeff, n)?,
                );
        }
        Ok(out)
    }

    fn check(&self, rs: &RootSystem, basis: &str) -> Result<()> {
        let h = &self.header;
        if h.schema_version != SCHEMA_VERSION
            || h.basis != basis
            || h.rank != rs.rank()
            || h.group_type != rs.type_label().to_string()
        {
            return Err(Error::Parse(format!(
                "table header {}{} {} v{} does not match {} {}",
                h.group_type,
                h.rank,
                h.basis,
                h.schema_version,
                rs.name(),
                basis
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}
