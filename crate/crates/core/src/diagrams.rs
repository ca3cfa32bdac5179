//! Young diagrams inscribed in the `(n-r) x r` rectangle.
//!
//! A diagram is stored as its increasing tuple `0 <= λ_1 <= ... <= λ_r <= n-r`.
//! Column `j` of the box set has length `λ_{r+1-j}`, so `□_{i,j}` belongs to the
//! diagram iff `i <= λ_{r+1-j}`. The tuple corresponds to the subset
//! `I = {λ_k + k}` of `{1..n}` and to the wedge basis vector `u_I`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("invalid ambient n={n}, r={r}: need 1 <= r <= n-1")]
    InvalidAmbient { n: usize, r: usize },
    #[error("invalid tuple {tuple:?} for n={n}, r={r}: {reason}")]
    InvalidTuple {
        tuple: Vec<usize>,
        n: usize,
        r: usize,
        reason: &'static str,
    },
    #[error("invalid subset {subset:?} for n={n}, r={r}")]
    InvalidSubset { subset: Vec<usize>, n: usize, r: usize },
    #[error("diagrams live in different rectangles")]
    AmbientMismatch,
    #[error("{mu} is not contained in {lambda}")]
    NotContained { mu: String, lambda: String },
    #[error("box {0} is not in the diagram")]
    BoxNotInDiagram(BoxCoord),
}

/// The pair `(n, r)`: `gl_n` and its `r`-th fundamental module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ambient {
    n: usize,
    r: usize,
}

impl Ambient {
    pub fn new(n: usize, r: usize) -> Result<Self, DiagramError> {
        if r == 0 || r + 1 > n {
            return Err(DiagramError::InvalidAmbient { n, r });
        }
        Ok(Ambient { n, r })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of rows `n - r` (range of the first box coordinate).
    pub fn rows(&self) -> usize {
        self.n - self.r
    }

    pub fn contains_coord(&self, b: BoxCoord) -> bool {
        (1..=self.rows()).contains(&b.i) && (1..=self.r).contains(&b.j)
    }

    /// z-label index `i - j + r` of `□_{i,j}`; always in `1..=n-1`.
    pub fn z_label(&self, b: BoxCoord) -> usize {
        b.i + self.r - b.j
    }

    /// All ambients with `2 <= n <= max_n`.
    pub fn all_up_to(max_n: usize) -> Vec<Ambient> {
        (2..=max_n)
            .flat_map(|n| (1..n).map(move |r| Ambient { n, r }))
            .collect()
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={},r={}", self.n, self.r)
    }
}

/// The unit box `□_{i,j}` with `1 <= i <= n-r`, `1 <= j <= r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoxCoord {
    pub i: usize,
    pub j: usize,
}

impl BoxCoord {
    pub fn new(i: usize, j: usize) -> Self {
        BoxCoord { i, j }
    }
}

impl fmt::Display for BoxCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.i, self.j)
    }
}

/// z-label of a box; free-function form of [`Ambient::z_label`].
pub fn z_label(b: BoxCoord, ambient: Ambient) -> usize {
    ambient.z_label(b)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct YoungDiagram {
    ambient: Ambient,
    tuple: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(ambient: Ambient, tuple: Vec<usize>) -> Result<Self, DiagramError> {
        let bad = |reason| DiagramError::InvalidTuple {
            tuple: tuple.clone(),
            n: ambient.n,
            r: ambient.r,
            reason,
        };
        if tuple.len() != ambient.r {
            return Err(bad("length must equal r"));
        }
        if tuple.windows(2).any(|w| w[0] > w[1]) {
            return Err(bad("entries must be weakly increasing"));
        }
        if tuple.last().is_some_and(|&l| l > ambient.rows()) {
            return Err(bad("entries must not exceed n-r"));
        }
        Ok(YoungDiagram { ambient, tuple })
    }

    /// Accepts parts in any order (e.g. a decreasing partition `2,1`), pads
    /// with zeros to length `r` and sorts into the increasing tuple.
    pub fn from_parts(ambient: Ambient, parts: &[usize]) -> Result<Self, DiagramError> {
        let mut t: Vec<usize> = parts.iter().copied().filter(|&p| p > 0).collect();
        if t.len() > ambient.r {
            return Err(DiagramError::InvalidTuple {
                tuple: parts.to_vec(),
                n: ambient.n,
                r: ambient.r,
                reason: "more than r nonzero parts",
            });
        }
        t.resize(ambient.r, 0);
        t.sort_unstable();
        YoungDiagram::new(ambient, t)
    }

    pub fn empty(ambient: Ambient) -> Self {
        YoungDiagram {
            ambient,
            tuple: vec![0; ambient.r],
        }
    }

    pub fn full(ambient: Ambient) -> Self {
        YoungDiagram {
            ambient,
            tuple: vec![ambient.rows(); ambient.r],
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn tuple(&self) -> &[usize] {
        &self.tuple
    }

    pub fn size(&self) -> usize {
        self.tuple.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    /// Length of column `j` (number of boxes `□_{i,j}`).
    pub fn column_len(&self, j: usize) -> usize {
        if j == 0 || j > self.ambient.r {
            return 0;
        }
        self.tuple[self.ambient.r - j]
    }

    pub fn contains_box(&self, b: BoxCoord) -> bool {
        b.i >= 1 && b.i <= self.column_len(b.j)
    }

    /// Boxes sorted by `(i, j)`.
    pub fn boxes(&self) -> Vec<BoxCoord> {
        let mut out: Vec<BoxCoord> = (1..=self.ambient.r)
            .flat_map(|j| (1..=self.column_len(j)).map(move |i| BoxCoord { i, j }))
            .collect();
        out.sort();
        out
    }

    pub fn box_set(&self) -> BTreeSet<BoxCoord> {
        self.boxes().into_iter().collect()
    }

    /// The r-subset `I = {λ_k + k}` of `{1..n}`.
    pub fn subset(&self) -> Vec<usize> {
        self.tuple
            .iter()
            .enumerate()
            .map(|(k, &l)| l + k + 1)
            .collect()
    }

    /// The 0/1 weight vector `ε` of `u_I`.
    pub fn weight(&self) -> Vec<u8> {
        let mut w = vec![0u8; self.ambient.n];
        for i in self.subset() {
            w[i - 1] = 1;
        }
        w
    }

    /// `self <= other` in the containment order.
    pub fn le(&self, other: &YoungDiagram) -> Result<bool, DiagramError> {
        if self.ambient != other.ambient {
            return Err(DiagramError::AmbientMismatch);
        }
        Ok(self.tuple.iter().zip(&other.tuple).all(|(a, b)| a <= b))
    }

    /// Diagrams obtained by adding one box (no upper bound).
    pub fn add_one_box(&self) -> Vec<YoungDiagram> {
        let r = self.ambient.r;
        (0..r)
            .filter(|&k| {
                let cap = if k + 1 < r {
                    self.tuple[k + 1]
                } else {
                    self.ambient.rows()
                };
                self.tuple[k] < cap
            })
            .map(|k| {
                let mut t = self.tuple.clone();
                t[k] += 1;
                YoungDiagram {
                    ambient: self.ambient,
                    tuple: t,
                }
            })
            .collect()
    }

    /// Diagrams obtained by removing one box.
    pub fn remove_one_box(&self) -> Vec<YoungDiagram> {
        (0..self.ambient.r)
            .filter(|&k| self.tuple[k] > 0 && (k == 0 || self.tuple[k - 1] < self.tuple[k]))
            .map(|k| {
                let mut t = self.tuple.clone();
                t[k] -= 1;
                YoungDiagram {
                    ambient: self.ambient,
                    tuple: t,
                }
            })
            .collect()
    }

    /// Compact label such as `(0,2)`.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.tuple.iter().map(|p| p.to_string()).collect();
        format!("({})", parts.join(","))
    }

    /// Comma-separated tuple as accepted by the command line.
    pub fn cli_arg(&self) -> String {
        let parts: Vec<String> = self.tuple.iter().map(|p| p.to_string()).collect();
        parts.join(",")
    }
}

impl Ord for YoungDiagram {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then_with(|| self.size().cmp(&other.size()))
            .then_with(|| self.tuple.cmp(&other.tuple))
    }
}

impl PartialOrd for YoungDiagram {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    n: usize,
    r: usize,
    tuple: Vec<usize>,
}

impl Serialize for YoungDiagram {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DiagramRepr {
            n: self.ambient.n,
            r: self.ambient.r,
            tuple: self.tuple.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for YoungDiagram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = DiagramRepr::deserialize(d)?;
        let amb = Ambient::new(repr.n, repr.r).map_err(serde::de::Error::custom)?;
        YoungDiagram::new(amb, repr.tuple).map_err(serde::de::Error::custom)
    }
}

/// All `C(n, r)` diagrams, ordered by size and then tuple.
pub fn all_diagrams(ambient: Ambient) -> Vec<YoungDiagram> {
    fn rec(amb: Ambient, prefix: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
        if prefix.len() == amb.r {
            out.push(YoungDiagram {
                ambient: amb,
                tuple: prefix.clone(),
            });
            return;
        }
        let lo = prefix.last().copied().unwrap_or(0);
        for v in lo..=amb.rows() {
            prefix.push(v);
            rec(amb, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(ambient, &mut Vec::new(), &mut out);
    out.sort();
    out
}

pub fn subset_to_diagram(subset: &[usize], ambient: Ambient) -> Result<YoungDiagram, DiagramError> {
    let bad = || DiagramError::InvalidSubset {
        subset: subset.to_vec(),
        n: ambient.n,
        r: ambient.r,
    };
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != ambient.r || subset.len() != ambient.r || s.iter().any(|&i| i == 0 || i > ambient.n) {
        return Err(bad());
    }
    let tuple = s.iter().enumerate().map(|(k, &i)| i - (k + 1)).collect();
    YoungDiagram::new(ambient, tuple)
}

pub fn contains(mu: &YoungDiagram, lambda: &YoungDiagram) -> Result<bool, DiagramError> {
    mu.le(lambda)
}

fn require_le(mu: &YoungDiagram, lambda: &YoungDiagram) -> Result<(), DiagramError> {
    if !mu.le(lambda)? {
        return Err(DiagramError::NotContained {
            mu: mu.label(),
            lambda: lambda.label(),
        });
    }
    Ok(())
}

/// All `μ'` with `μ < μ' <= λ` and `|μ'/μ| = 1`.
pub fn covers(mu: &YoungDiagram, lambda: &YoungDiagram) -> Result<Vec<YoungDiagram>, DiagramError> {
    require_le(mu, lambda)?;
    Ok(mu
        .add_one_box()
        .into_iter()
        .filter(|m| m.tuple.iter().zip(&lambda.tuple).all(|(a, b)| a <= b))
        .collect())
}

/// Streams the saturated chains `μ = μ_1 < μ_2 < ... < μ_d < λ` where each step
/// adds one box and `|λ/μ_d| = 1`. Each chain is yielded as `[μ_1, ..., μ_d]`.
pub fn saturated_chains(mu: &YoungDiagram, lambda: &YoungDiagram) -> Result<ChainIter, DiagramError> {
    require_le(mu, lambda)?;
    if mu == lambda {
        return Err(DiagramError::NotContained {
            mu: mu.label(),
            lambda: format!("{} strictly", lambda.label()),
        });
    }
    let first = covers(mu, lambda)?;
    Ok(ChainIter {
        lambda: lambda.clone(),
        path: vec![mu.clone()],
        stack: vec![first],
    })
}

/// Depth-first iterator behind [`saturated_chains`].
pub struct ChainIter {
    lambda: YoungDiagram,
    path: Vec<YoungDiagram>,
    stack: Vec<Vec<YoungDiagram>>,
}

impl Iterator for ChainIter {
    type Item = Vec<YoungDiagram>;

    fn next(&mut self) -> Option<Vec<YoungDiagram>> {
        loop {
            let top = self.stack.last_mut()?;
            let Some(next) = top.pop() else {
                self.stack.pop();
                self.path.pop();
                continue;
            };
            if next == self.lambda {
                // the path ends one box below λ
                return Some(self.path.clone());
            }
            let children = covers(&next, &self.lambda).expect("next <= lambda");
            self.path.push(next);
            self.stack.push(children);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryType {
    NotBoundary,
    Active,
    Corner,
    Flat,
}

pub fn boundary_type(b: BoxCoord, lambda: &YoungDiagram) -> Result<BoundaryType, DiagramError> {
    if !lambda.contains_box(b) {
        return Err(DiagramError::BoxNotInDiagram(b));
    }
    let has = |i, j| lambda.contains_box(BoxCoord::new(i, j));
    if has(b.i + 1, b.j + 1) {
        return Ok(BoundaryType::NotBoundary);
    }
    Ok(match (has(b.i, b.j + 1), has(b.i + 1, b.j)) {
        (false, false) => BoundaryType::Active,
        (true, true) => BoundaryType::Corner,
        _ => BoundaryType::Flat,
    })
}

/// Counts `k_1..k_{n-1}` of boxes of `λ` per z-label (index `m-1` holds `k_m`).
pub fn f_multiset(lambda: &YoungDiagram) -> Vec<usize> {
    label_counts(lambda.ambient, lambda.boxes())
}

pub(crate) fn label_counts(ambient: Ambient, cells: impl IntoIterator<Item = BoxCoord>) -> Vec<usize> {
    let mut k = vec![0; ambient.n - 1];
    for b in cells {
        k[ambient.z_label(b) - 1] += 1;
    }
    k
}

/// The skew shape `λ/μ` with `μ <= λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewShape {
    lambda: YoungDiagram,
    mu: YoungDiagram,
}

impl SkewShape {
    pub fn new(lambda: YoungDiagram, mu: YoungDiagram) -> Result<Self, DiagramError> {
        require_le(&mu, &lambda)?;
        Ok(SkewShape { lambda, mu })
    }

    pub fn lambda(&self) -> &YoungDiagram {
        &self.lambda
    }

    pub fn mu(&self) -> &YoungDiagram {
        &self.mu
    }

    pub fn cells(&self) -> Vec<BoxCoord> {
        self.lambda
            .boxes()
            .into_iter()
            .filter(|&b| !self.mu.contains_box(b))
            .collect()
    }

    /// `k_1..k_{n-1}`; `k_n` is implicitly zero.
    pub fn kvector(&self) -> Vec<usize> {
        label_counts(self.lambda.ambient, self.cells())
    }
}

/// Number of standard Young tableaux of shape `λ`, by recursive removal of
/// corner boxes.
pub fn syt_count(lambda: &YoungDiagram) -> u128 {
    fn rec(d: &YoungDiagram, memo: &mut HashMap<Vec<usize>, u128>) -> u128 {
        if d.is_empty() {
            return 1;
        }
        if let Some(&c) = memo.get(&d.tuple) {
            return c;
        }
        let c = d.remove_one_box().iter().map(|s| rec(s, memo)).sum();
        memo.insert(d.tuple.clone(), c);
        c
    }
    rec(lambda, &mut HashMap::new())
}
