//! Finite root systems and Weyl groups.
//!
//! Roots live in simple-root coordinates and coweights in simple-coroot
//! coordinates. The only bilinear form ever used is the pairing through the
//! Cartan matrix `cartan[i][j] = <alpha_i, alpha_j^vee>`, so nothing here needs
//! real arithmetic.
//!
//! Simple roots follow Bourbaki numbering. In `B_n` the last simple root is
//! short, in `C_n` it is long, in `F_4` the roots `alpha_1, alpha_2` are long,
//! and in `G_2` the first simple root is short. The highest root of `G_2` is
//! therefore `3 alpha_1 + 2 alpha_2`.
//!
//! Words of simple reflections are written with labels `1..=r`; matrix and
//! coordinate indices are 0-based.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeLabel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl TypeLabel {
    pub fn from_char(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Self::A,
            'B' => Self::B,
            'C' => Self::C,
            'D' => Self::D,
            'E' => Self::E,
            'F' => Self::F,
            'G' => Self::G,
            _ => return None,
        })
    }

    pub fn as_char(self) -> char {
        match self {
            Self::A => 'A',
            Self::B => 'B',
            Self::C => 'C',
            Self::D => 'D',
            Self::E => 'E',
            Self::F => 'F',
            Self::G => 'G',
        }
    }

    /// Rank implied by the letter alone, where there is only one choice.
    pub fn default_rank(self) -> Option<usize> {
        match self {
            Self::F => Some(4),
            Self::G => Some(2),
            _ => None,
        }
    }

    pub fn is_valid_rank(self, rank: usize) -> bool {
        if rank == 0 || rank > 8 {
            return false;
        }
        match self {
            Self::A => true,
            Self::B | Self::C => rank >= 2,
            Self::D => rank >= 4,
            Self::E => (6..=8).contains(&rank),
            Self::F => rank == 4,
            Self::G => rank == 2,
        }
    }

    /// Number of positive roots of the irreducible system of this type.
    pub fn positive_root_count(self, rank: usize) -> usize {
        let n = rank;
        match self {
            Self::A => n * (n + 1) / 2,
            Self::B | Self::C => n * n,
            Self::D => n * (n - 1),
            Self::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Self::F => 24,
            Self::G => 6,
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

macro_rules! lattice_vec {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub struct $name(pub Vec<i64>);

        impl $name {
            pub fn new(coords: Vec<i64>) -> Self {
                Self(coords)
            }

            pub fn zeros(rank: usize) -> Self {
                Self(vec![0; rank])
            }

            pub fn unit(rank: usize, i: usize) -> Self {
                let mut v = vec![0; rank];
                v[i] = 1;
                Self(v)
            }

            pub fn coords(&self) -> &[i64] {
                &self.0
            }

            pub fn rank(&self) -> usize {
                self.0.len()
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|&c| c == 0)
            }

            pub fn add(&self, other: &Self) -> Self {
                debug_assert_eq!(self.rank(), other.rank());
                Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
            }

            pub fn sub(&self, other: &Self) -> Self {
                debug_assert_eq!(self.rank(), other.rank());
                Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
            }

            pub fn neg(&self) -> Self {
                Self(self.0.iter().map(|a| -a).collect())
            }

            pub fn scale(&self, k: i64) -> Self {
                Self(self.0.iter().map(|a| k * a).collect())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    };
}

lattice_vec!(RootVec, "Integer vector in the basis of simple roots.");
lattice_vec!(
    CoweightVec,
    "Element of the coroot lattice in the basis of simple coroots."
);

impl RootVec {
    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c <= 0)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }
}

/// Dense square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct IntMat {
    n: usize,
    a: Vec<i64>,
}

impl IntMat {
    fn identity(n: usize) -> Self {
        let mut a = vec![0; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        Self { n, a }
    }

    fn get(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.n + j]
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut a = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    a[i * n + j] += x * other.a[k * n + j];
                }
            }
        }
        Self { n, a }
    }

    fn apply(&self, x: &[i64]) -> Vec<i64> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.a[i * n + j] * x[j]).sum())
            .collect()
    }

    fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }
}

/// Element of the finite Weyl group.
///
/// The canonical form is the action matrix on coweight coordinates; equality,
/// hashing and ordering look only at it. The root action and both inverses are
/// carried along so that no rational inversion is ever needed.
#[derive(Debug, Clone)]
pub struct WeylElement {
    act: IntMat,
    act_inv: IntMat,
    root_act: IntMat,
    root_inv: IntMat,
    length: usize,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.act == other.act
    }
}
impl Eq for WeylElement {}

impl std::hash::Hash for WeylElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.act.hash(state);
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.length
            .cmp(&other.length)
            .then_with(|| self.act.cmp(&other.act))
    }
}

impl WeylElement {
    pub fn rank(&self) -> usize {
        self.act.n
    }

    /// Number of positive roots sent to negative roots.
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.act.is_identity()
    }

    /// Action matrix on simple-coroot coordinates, row-major.
    pub fn action_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.act.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.act.get(i, j)).collect())
            .collect()
    }

    pub fn act_coweight(&self, mu: &CoweightVec) -> CoweightVec {
        CoweightVec(self.act.apply(&mu.0))
    }

    pub fn act_root(&self, alpha: &RootVec) -> RootVec {
        RootVec(self.root_act.apply(&alpha.0))
    }

    pub fn inv_act_coweight(&self, mu: &CoweightVec) -> CoweightVec {
        CoweightVec(self.act_inv.apply(&mu.0))
    }

    pub fn inv_act_root(&self, alpha: &RootVec) -> RootVec {
        RootVec(self.root_inv.apply(&alpha.0))
    }

    pub fn inverse(&self) -> WeylElement {
        WeylElement {
            act: self.act_inv.clone(),
            act_inv: self.act.clone(),
            root_act: self.root_inv.clone(),
            root_inv: self.root_act.clone(),
            length: self.length,
        }
    }

    fn compose_raw(&self, other: &WeylElement) -> (IntMat, IntMat, IntMat, IntMat) {
        (
            self.act.mul(&other.act),
            other.act_inv.mul(&self.act_inv),
            self.root_act.mul(&other.root_act),
            other.root_inv.mul(&self.root_inv),
        )
    }
}

/// Things the Weyl group acts on.
pub trait WeylAction: Sized {
    fn weyl_act(&self, w: &WeylElement) -> Result<Self>;
}

impl WeylAction for RootVec {
    fn weyl_act(&self, w: &WeylElement) -> Result<Self> {
        check_rank(w.rank(), self.rank())?;
        Ok(w.act_root(self))
    }
}

impl WeylAction for CoweightVec {
    fn weyl_act(&self, w: &WeylElement) -> Result<Self> {
        check_rank(w.rank(), self.rank())?;
        Ok(w.act_coweight(self))
    }
}

/// `weyl_act(w, x)` for roots or coweights.
pub fn weyl_act<X: WeylAction>(w: &WeylElement, x: &X) -> Result<X> {
    x.weyl_act(w)
}

fn check_rank(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::RankMismatch { expected, got })
    }
}

/// Subset `I_P` of the simple indices (0-based internally, labels are 1-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct ParabolicType {
    subset: BTreeSet<usize>,
}

impl ParabolicType {
    pub fn borel() -> Self {
        Self::default()
    }

    /// Build from 1-based labels.
    pub fn from_labels(rank: usize, labels: &[usize]) -> Result<Self> {
        let mut subset = BTreeSet::new();
        for &l in labels {
            if l == 0 || l > rank {
                return Err(Error::IndexOutOfRange { index: l, rank });
            }
            subset.insert(l - 1);
        }
        Ok(Self { subset })
    }

    pub fn full(rank: usize) -> Self {
        Self {
            subset: (0..rank).collect(),
        }
    }

    /// 0-based membership test.
    pub fn contains(&self, i: usize) -> bool {
        self.subset.contains(&i)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.subset.iter().copied()
    }

    /// Sorted 1-based labels.
    pub fn labels(&self) -> Vec<usize> {
        self.subset.iter().map(|i| i + 1).collect()
    }

    pub fn is_borel(&self) -> bool {
        self.subset.is_empty()
    }

    pub fn len(&self) -> usize {
        self.subset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subset.is_empty()
    }

    /// 0-based simple indices outside the subset, i.e. the curve-class coordinates.
    pub fn complement(&self, rank: usize) -> Vec<usize> {
        (0..rank).filter(|i| !self.contains(*i)).collect()
    }

    /// Whether a root lies in the span of the simple roots of the subset.
    pub fn contains_root(&self, alpha: &RootVec) -> bool {
        alpha
            .coords()
            .iter()
            .enumerate()
            .all(|(i, &c)| c == 0 || self.contains(i))
    }
}

impl fmt::Display for ParabolicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Output of [`RootSystem::enumerate_weyl`].
#[derive(Debug, Clone)]
pub struct WeylEnumeration {
    pub all: Vec<WeylElement>,
    pub parabolic_subgroup: Vec<WeylElement>,
    pub min_reps: Vec<WeylElement>,
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    type_label: TypeLabel,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<RootVec>,
    positive_coroots: Vec<CoweightVec>,
    highest_root: RootVec,
    highest_coroot: CoweightVec,
    root_index: HashMap<RootVec, usize>,
}

fn cartan_matrix(label: TypeLabel, n: usize) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, cij: i64, cji: i64| {
        c[i][j] = cij;
        c[j][i] = cji;
    };
    match label {
        TypeLabel::A => {
            for i in 0..n.saturating_sub(1) {
                link(i, i + 1, -1, -1);
            }
        }
        TypeLabel::B => {
            for i in 0..n - 2 {
                link(i, i + 1, -1, -1);
            }
            // alpha_{n-1} long, alpha_n short
            link(n - 2, n - 1, -2, -1);
        }
        TypeLabel::C => {
            for i in 0..n - 2 {
                link(i, i + 1, -1, -1);
            }
            // alpha_{n-1} short, alpha_n long
            link(n - 2, n - 1, -1, -2);
        }
        TypeLabel::D => {
            for i in 0..n - 2 {
                link(i, i + 1, -1, -1);
            }
            link(n - 3, n - 1, -1, -1);
        }
        TypeLabel::E => {
            // Bourbaki: 1-3-4-5-6-7-8 with 2 attached to 4.
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            for i in 2..n - 1 {
                link(i, i + 1, -1, -1);
            }
        }
        TypeLabel::F => {
            link(0, 1, -1, -1);
            link(1, 2, -2, -1);
            link(2, 3, -1, -1);
        }
        TypeLabel::G => {
            // alpha_1 short, alpha_2 long
            link(0, 1, -1, -3);
        }
    }
    c
}

impl RootSystem {
    pub fn build(type_label: TypeLabel, rank: usize) -> Result<Self> {
        if !type_label.is_valid_rank(rank) {
            return Err(Error::InvalidType {
                label: type_label.as_char(),
                rank,
            });
        }
        let cartan = cartan_matrix(type_label, rank);
        let mut rs = RootSystem {
            type_label,
            rank,
            cartan,
            positive_roots: Vec::new(),
            positive_coroots: Vec::new(),
            highest_root: RootVec::zeros(rank),
            highest_coroot: CoweightVec::zeros(rank),
            root_index: HashMap::new(),
        };

        // Orbit of the simple (root, coroot) pairs under the simple reflections.
        let mut seen: HashMap<RootVec, CoweightVec> = HashMap::new();
        let mut queue = VecDeque::new();
        for i in 0..rank {
            let pair = (RootVec::unit(rank, i), CoweightVec::unit(rank, i));
            seen.insert(pair.0.clone(), pair.1.clone());
            queue.push_back(pair);
        }
        while let Some((alpha, coroot)) = queue.pop_front() {
            for j in 0..rank {
                let a = rs.reflect_root(j, &alpha);
                if !seen.contains_key(&a) {
                    let c = rs.reflect_coweight(j, &coroot);
                    seen.insert(a.clone(), c.clone());
                    queue.push_back((a, c));
                }
            }
        }
        let mut pos: Vec<(RootVec, CoweightVec)> =
            seen.into_iter().filter(|(a, _)| a.is_positive()).collect();
        pos.sort_by(|x, y| x.0.height().cmp(&y.0.height()).then_with(|| y.0.cmp(&x.0)));
        debug_assert_eq!(pos.len(), type_label.positive_root_count(rank));

        rs.positive_roots = pos.iter().map(|p| p.0.clone()).collect();
        rs.positive_coroots = pos.iter().map(|p| p.1.clone()).collect();
        let top = pos.last().expect("non-empty root system");
        rs.highest_root = top.0.clone();
        rs.highest_coroot = top.1.clone();
        rs.root_index = rs
            .positive_roots
            .iter()
            .enumerate()
            .map(|(k, a)| (a.clone(), k))
            .collect();
        Ok(rs)
    }

    pub fn type_label(&self) -> TypeLabel {
        self.type_label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.type_label, self.rank)
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[RootVec] {
        &self.positive_roots
    }

    pub fn positive_coroots(&self) -> &[CoweightVec] {
        &self.positive_coroots
    }

    /// All roots, positive ones first then their negatives.
    pub fn all_roots(&self) -> impl Iterator<Item = RootVec> + '_ {
        self.positive_roots
            .iter()
            .cloned()
            .chain(self.positive_roots.iter().map(|a| a.neg()))
    }

    /// The highest root `alpha_0`.
    pub fn highest_root(&self) -> &RootVec {
        &self.highest_root
    }

    pub fn highest_coroot(&self) -> &CoweightVec {
        &self.highest_coroot
    }

    pub fn simple_root(&self, i: usize) -> RootVec {
        RootVec::unit(self.rank, i)
    }

    pub fn simple_coroot(&self, i: usize) -> CoweightVec {
        CoweightVec::unit(self.rank, i)
    }

    /// Index of a positive root in [`Self::positive_roots`].
    pub fn positive_root_index(&self, alpha: &RootVec) -> Option<usize> {
        self.root_index.get(alpha).copied()
    }

    pub fn is_root(&self, alpha: &RootVec) -> bool {
        self.root_index.contains_key(alpha) || self.root_index.contains_key(&alpha.neg())
    }

    /// Coroot of a (positive or negative) root.
    pub fn coroot(&self, alpha: &RootVec) -> Option<CoweightVec> {
        if let Some(&k) = self.root_index.get(alpha) {
            Some(self.positive_coroots[k].clone())
        } else {
            self.root_index
                .get(&alpha.neg())
                .map(|&k| self.positive_coroots[k].neg())
        }
    }

    /// `<alpha, mu>`, bilinear through the Cartan matrix.
    pub fn pairing(&self, alpha: &RootVec, mu: &CoweightVec) -> Result<i64> {
        check_rank(self.rank, alpha.rank())?;
        check_rank(self.rank, mu.rank())?;
        Ok(self.pair(alpha, mu))
    }

    /// Unchecked [`Self::pairing`]; ranks must agree.
    pub fn pair(&self, alpha: &RootVec, mu: &CoweightVec) -> i64 {
        let mut s = 0;
        for (i, &a) in alpha.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &m) in mu.0.iter().enumerate() {
                s += a * m * self.cartan[i][j];
            }
        }
        s
    }

    fn reflect_root(&self, j: usize, alpha: &RootVec) -> RootVec {
        let k: i64 = (0..self.rank).map(|l| alpha.0[l] * self.cartan[l][j]).sum();
        let mut out = alpha.clone();
        out.0[j] -= k;
        out
    }

    fn reflect_coweight(&self, j: usize, mu: &CoweightVec) -> CoweightVec {
        let k: i64 = (0..self.rank).map(|l| self.cartan[j][l] * mu.0[l]).sum();
        let mut out = mu.clone();
        out.0[j] -= k;
        out
    }

    fn element_from_mats(
        &self,
        act: IntMat,
        act_inv: IntMat,
        root_act: IntMat,
        root_inv: IntMat,
    ) -> WeylElement {
        let length = self
            .positive_roots
            .iter()
            .filter(|a| RootVec(root_act.apply(&a.0)).is_negative())
            .count();
        WeylElement {
            act,
            act_inv,
            root_act,
            root_inv,
            length,
        }
    }

    pub fn identity(&self) -> WeylElement {
        let id = IntMat::identity(self.rank);
        WeylElement {
            act: id.clone(),
            act_inv: id.clone(),
            root_act: id.clone(),
            root_inv: id,
            length: 0,
        }
    }

    /// Reflection in a (positive or negative) root.
    pub fn reflection(&self, beta: &RootVec) -> Result<WeylElement> {
        check_rank(self.rank, beta.rank())?;
        let coroot = self
            .coroot(beta)
            .ok_or_else(|| Error::Parse(format!("{beta} is not a root")))?;
        let n = self.rank;
        // mu -> mu - <beta, mu> beta^vee
        let beta_row: Vec<i64> = (0..n)
            .map(|l| (0..n).map(|m| beta.0[m] * self.cartan[m][l]).sum())
            .collect();
        let mut act = IntMat::identity(n);
        for k in 0..n {
            for l in 0..n {
                act.a[k * n + l] -= coroot.0[k] * beta_row[l];
            }
        }
        // alpha -> alpha - <alpha, beta^vee> beta
        let cb: Vec<i64> = (0..n)
            .map(|l| (0..n).map(|m| self.cartan[l][m] * coroot.0[m]).sum())
            .collect();
        let mut root_act = IntMat::identity(n);
        for k in 0..n {
            for l in 0..n {
                root_act.a[k * n + l] -= beta.0[k] * cb[l];
            }
        }
        Ok(self.element_from_mats(act.clone(), act, root_act.clone(), root_act))
    }

    /// Simple reflection `s_i`, 0-based index.
    pub fn simple_reflection(&self, i: usize) -> WeylElement {
        self.reflection(&self.simple_root(i))
            .expect("simple roots are roots")
    }

    pub fn compose(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        let (act, act_inv, root_act, root_inv) = a.compose_raw(b);
        self.element_from_mats(act, act_inv, root_act, root_inv)
    }

    /// Product of simple reflections given by 1-based labels.
    pub fn from_word(&self, word: &[usize]) -> Result<WeylElement> {
        let mut w = self.identity();
        for &l in word {
            if l == 0 || l > self.rank {
                return Err(Error::IndexOutOfRange {
                    index: l,
                    rank: self.rank,
                });
            }
            w = self.compose(&w, &self.simple_reflection(l - 1));
        }
        Ok(w)
    }

    /// Lexicographically least reduced word, as 1-based labels.
    pub fn reduced_word(&self, w: &WeylElement) -> Vec<usize> {
        let mut word = Vec::with_capacity(w.length());
        let mut cur = w.clone();
        while cur.length() > 0 {
            let i = (0..self.rank)
                .find(|&i| cur.inv_act_root(&self.simple_root(i)).is_negative())
                .expect("non-identity element has a left descent");
            word.push(i + 1);
            cur = self.compose(&self.simple_reflection(i), &cur);
        }
        word
    }

    /// `s1*s2*...`, or `e` for the identity.
    pub fn word_string(&self, w: &WeylElement) -> String {
        let word = self.reduced_word(w);
        if word.is_empty() {
            "e".to_string()
        } else {
            word.iter()
                .map(|l| format!("s{l}"))
                .collect::<Vec<_>>()
                .join("*")
        }
    }

    /// Inverse of [`Self::word_string`]; accepts any (not necessarily reduced) word.
    pub fn parse_word(&self, s: &str) -> Result<WeylElement> {
        let labels = parse_labels(s, 1)?;
        self.from_word(&labels)
    }

    /// Whether `w` is the minimal representative of `w W_P`.
    pub fn is_min_rep(&self, w: &WeylElement, p: &ParabolicType) -> bool {
        p.indices()
            .all(|i| w.act_root(&self.simple_root(i)).is_positive())
    }

    pub fn min_coset_rep(&self, w: &WeylElement, p: &ParabolicType) -> WeylElement {
        let mut cur = w.clone();
        loop {
            let descent = p
                .indices()
                .find(|&i| cur.act_root(&self.simple_root(i)).is_negative());
            match descent {
                Some(i) => cur = self.compose(&cur, &self.simple_reflection(i)),
                None => return cur,
            }
        }
    }

    fn generate(&self, gens: &[usize]) -> Vec<WeylElement> {
        let refl: Vec<WeylElement> = gens.iter().map(|&i| self.simple_reflection(i)).collect();
        let id = self.identity();
        let mut seen: HashSet<WeylElement> = HashSet::new();
        seen.insert(id.clone());
        let mut out = vec![id.clone()];
        let mut frontier = vec![id];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for s in &refl {
                    let ws = self.compose(w, s);
                    if seen.insert(ws.clone()) {
                        next.push(ws.clone());
                        out.push(ws);
                    }
                }
            }
            frontier = next;
        }
        let mut keyed: Vec<(Vec<usize>, WeylElement)> = out
            .into_iter()
            .map(|w| (self.reduced_word(&w), w))
            .collect();
        keyed.sort_by(|a, b| a.1.length().cmp(&b.1.length()).then_with(|| a.0.cmp(&b.0)));
        keyed.into_iter().map(|(_, w)| w).collect()
    }

    /// `(W, W_P, W^P)`, each sorted by length then reduced word.
    pub fn enumerate_weyl(&self, p: &ParabolicType) -> WeylEnumeration {
        let all = self.generate(&(0..self.rank).collect::<Vec<_>>());
        let parabolic_subgroup = self.generate(&p.indices().collect::<Vec<_>>());
        let min_reps = all
            .iter()
            .filter(|w| self.is_min_rep(w, p))
            .cloned()
            .collect();
        WeylEnumeration {
            all,
            parabolic_subgroup,
            min_reps,
        }
    }

    /// `omega_i - v(omega_i)` in the root lattice, 0-based `i`.
    ///
    /// Telescopes over a reduced word `v = s_{j_1} ... s_{j_k}`: every letter
    /// equal to `i` contributes `s_{j_1} ... s_{j_{t-1}}(alpha_i)`.
    pub fn omega_minus_v_omega(&self, i: usize, v: &WeylElement) -> RootVec {
        let mut acc = RootVec::zeros(self.rank);
        let mut prefix = self.identity();
        for l in self.reduced_word(v) {
            let j = l - 1;
            if j == i {
                acc = acc.add(&prefix.act_root(&self.simple_root(i)));
            }
            prefix = self.compose(&prefix, &self.simple_reflection(j));
        }
        acc
    }
}

/// Parse `s1*s2*s0` / `e` into labels; labels below `min_label` are rejected.
pub(crate) fn parse_labels(s: &str, min_label: usize) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() || s == "e" || s == "1" {
        return Ok(Vec::new());
    }
    s.split('*')
        .map(|tok| {
            let tok = tok.trim();
            let digits = tok
                .strip_prefix('s')
                .ok_or_else(|| Error::Parse(format!("expected s<k>, got {tok:?}")))?;
            let l: usize = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator {tok:?}")))?;
            if l < min_label {
                return Err(Error::Parse(format!("generator {tok:?} not allowed here")));
            }
            Ok(l)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(t: TypeLabel, r: usize) -> RootSystem {
        RootSystem::build(t, r).unwrap()
    }

    #[test]
    fn a1_and_a2_roots() {
        let a1 = rs(TypeLabel::A, 1);
        assert_eq!(a1.positive_roots(), &[RootVec(vec![1])]);
        assert_eq!(a1.highest_root(), &RootVec(vec![1]));

        let a2 = rs(TypeLabel::A, 2);
        let mut roots = a2.positive_roots().to_vec();
        roots.sort();
        assert_eq!(
            roots,
            vec![
                RootVec(vec![0, 1]),
                RootVec(vec![1, 0]),
                RootVec(vec![1, 1])
            ]
        );
        assert_eq!(a2.highest_root(), &RootVec(vec![1, 1]));
    }

    #[test]
    fn g2_highest_root() {
        let g2 = rs(TypeLabel::G, 2);
        assert_eq!(g2.positive_roots().len(), 6);
        assert_eq!(g2.highest_root(), &RootVec(vec![3, 2]));
    }

    #[test]
    fn invalid_types() {
        assert!(RootSystem::build(TypeLabel::B, 1).is_err());
        assert!(RootSystem::build(TypeLabel::D, 3).is_err());
        assert!(RootSystem::build(TypeLabel::E, 5).is_err());
        assert!(RootSystem::build(TypeLabel::A, 9).is_err());
    }

    #[test]
    fn root_counts_all_types() {
        let cases = [
            (TypeLabel::A, 4),
            (TypeLabel::B, 3),
            (TypeLabel::C, 4),
            (TypeLabel::D, 5),
            (TypeLabel::E, 6),
            (TypeLabel::E, 7),
            (TypeLabel::E, 8),
            (TypeLabel::F, 4),
        ];
        for (t, r) in cases {
            let s = rs(t, r);
            assert_eq!(s.positive_roots().len(), t.positive_root_count(r), "{t}{r}");
            let top = s.highest_root();
            for a in s.positive_roots() {
                assert!(top.sub(a).coords().iter().all(|&c| c >= 0), "{t}{r}");
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let a2 = rs(TypeLabel::A, 2);
        assert_eq!(
            a2.pairing(&RootVec(vec![1, 0]), &CoweightVec(vec![0, 1]))
                .unwrap(),
            -1
        );
        assert_eq!(
            a2.pairing(&RootVec(vec![1, 1]), &CoweightVec(vec![1, 1]))
                .unwrap(),
            2
        );
        let a1 = rs(TypeLabel::A, 1);
        assert_eq!(
            a1.pairing(&RootVec(vec![1]), &CoweightVec(vec![1]))
                .unwrap(),
            2
        );
        assert!(matches!(
            a2.pairing(&RootVec(vec![1]), &CoweightVec(vec![1, 0])),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn weyl_act_examples() {
        let a1 = rs(TypeLabel::A, 1);
        let s = a1.simple_reflection(0);
        assert_eq!(
            weyl_act(&s, &CoweightVec(vec![1])).unwrap(),
            CoweightVec(vec![-1])
        );
        let a2 = rs(TypeLabel::A, 2);
        let s1 = a2.simple_reflection(0);
        assert_eq!(
            weyl_act(&s1, &CoweightVec(vec![0, 1])).unwrap(),
            CoweightVec(vec![1, 1])
        );
        let x = RootVec(vec![3, -2]);
        assert_eq!(weyl_act(&a2.identity(), &x).unwrap(), x);
        assert!(weyl_act(&s1, &CoweightVec(vec![1])).is_err());
    }

    #[test]
    fn group_orders() {
        for (t, r, n) in [
            (TypeLabel::A, 1, 2),
            (TypeLabel::A, 2, 6),
            (TypeLabel::B, 2, 8),
            (TypeLabel::C, 2, 8),
            (TypeLabel::G, 2, 12),
            (TypeLabel::A, 3, 24),
            (TypeLabel::B, 3, 48),
        ] {
            let s = rs(t, r);
            let e = s.enumerate_weyl(&ParabolicType::borel());
            assert_eq!(e.all.len(), n);
            assert_eq!(e.min_reps.len(), n);
        }
    }

    #[test]
    fn parabolic_enumeration() {
        let a1 = rs(TypeLabel::A, 1);
        let e = a1.enumerate_weyl(&ParabolicType::borel());
        assert_eq!(e.min_reps.len(), 2);

        let a2 = rs(TypeLabel::A, 2);
        let p = ParabolicType::from_labels(2, &[2]).unwrap();
        let e = a2.enumerate_weyl(&p);
        let words: Vec<String> = e.min_reps.iter().map(|w| a2.word_string(w)).collect();
        assert_eq!(words, vec!["e", "s1", "s2*s1"]);
        assert_eq!(e.all.len(), e.parabolic_subgroup.len() * e.min_reps.len());

        let full = ParabolicType::full(2);
        let e = a2.enumerate_weyl(&full);
        assert_eq!(e.min_reps.len(), 1);
        assert!(e.min_reps[0].is_identity());
    }

    #[test]
    fn min_coset_rep_examples() {
        let a2 = rs(TypeLabel::A, 2);
        let p = ParabolicType::from_labels(2, &[2]).unwrap();
        let s2 = a2.parse_word("s2").unwrap();
        assert!(a2.min_coset_rep(&s2, &p).is_identity());
        let s1s2 = a2.parse_word("s1*s2").unwrap();
        assert_eq!(a2.min_coset_rep(&s1s2, &p), a2.parse_word("s1").unwrap());
        for w in a2.enumerate_weyl(&ParabolicType::borel()).all {
            assert_eq!(a2.min_coset_rep(&w, &ParabolicType::borel()), w);
        }
    }

    #[test]
    fn lengths_match_bfs_depth_and_inversions() {
        for (t, r) in [
            (TypeLabel::A, 2),
            (TypeLabel::B, 2),
            (TypeLabel::G, 2),
            (TypeLabel::A, 3),
        ] {
            let s = rs(t, r);
            for w in s.enumerate_weyl(&ParabolicType::borel()).all {
                let inv = s
                    .positive_roots()
                    .iter()
                    .filter(|a| w.act_root(a).is_negative())
                    .count();
                assert_eq!(inv, w.length());
                assert_eq!(s.reduced_word(&w).len(), w.length());
                assert_eq!(s.from_word(&s.reduced_word(&w)).unwrap(), w);
            }
        }
    }

    #[test]
    fn action_permutes_roots_and_preserves_pairing() {
        for (t, r) in [(TypeLabel::A, 2), (TypeLabel::C, 2), (TypeLabel::G, 2)] {
            let s = rs(t, r);
            let all: Vec<RootVec> = s.all_roots().collect();
            for w in s.enumerate_weyl(&ParabolicType::borel()).all {
                for a in &all {
                    assert!(s.is_root(&w.act_root(a)));
                    assert_eq!(w.inv_act_root(&w.act_root(a)), *a);
                    for x in -2..=2 {
                        for y in -2..=2 {
                            let mu = CoweightVec(vec![x, y]);
                            assert_eq!(
                                s.pair(&w.act_root(a), &w.act_coweight(&mu)),
                                s.pair(a, &mu)
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn group_action_law() {
        let s = rs(TypeLabel::G, 2);
        let ws = s.enumerate_weyl(&ParabolicType::borel()).all;
        let mu = CoweightVec(vec![2, -1]);
        let alpha = RootVec(vec![1, 1]);
        for a in &ws {
            for b in &ws {
                let ab = s.compose(a, b);
                assert_eq!(ab.act_coweight(&mu), a.act_coweight(&b.act_coweight(&mu)));
                assert_eq!(ab.act_root(&alpha), a.act_root(&b.act_root(&alpha)));
            }
        }
    }

    #[test]
    fn omega_telescoping_matches_definition() {
        let a2 = rs(TypeLabel::A, 2);
        let s1 = a2.parse_word("s1").unwrap();
        assert_eq!(a2.omega_minus_v_omega(0, &s1), RootVec(vec![1, 0]));
        assert_eq!(a2.omega_minus_v_omega(1, &s1), RootVec(vec![0, 0]));
        let s2s1 = a2.parse_word("s2*s1").unwrap();
        assert_eq!(a2.omega_minus_v_omega(0, &s2s1), RootVec(vec![1, 1]));
    }

    #[test]
    fn word_parsing() {
        let a2 = rs(TypeLabel::A, 2);
        assert!(a2.parse_word("e").unwrap().is_identity());
        assert!(a2.parse_word("s1*s1").unwrap().is_identity());
        assert!(a2.parse_word("s3").is_err());
        assert!(a2.parse_word("t1").is_err());
        let w = a2.parse_word("s1*s2*s1").unwrap();
        assert_eq!(a2.word_string(&w), "s1*s2*s1");
    }
}
