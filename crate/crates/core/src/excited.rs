//! Excited diagrams and the three computations of `g_{λ/μ}`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagrams::{covers, saturated_chains, syt_count, Ambient, BoxCoord, DiagramError, SkewShape, YoungDiagram};
use crate::hooks::{hook_lengths, hook_weight, hook_weights, z_content};
use crate::symbolic::{Poly, RatFunc, SymbolicError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExcitedError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("cell set is not contained in {0}")]
    NotSubset(String),
    #[error("box {0} is not active")]
    NotActive(BoxCoord),
    #[error("unknown route {0:?}")]
    UnknownRoute(String),
    #[error("cache: {0}")]
    Cache(String),
}

/// A set of cells of `λ` reached from the boxes of `μ` by elementary excitations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcitedDiagram {
    pub lambda: YoungDiagram,
    pub cells: BTreeSet<BoxCoord>,
    /// `(cell of μ, cell of this diagram)`: the bijection recorded along the excitations.
    pub trace: Vec<(BoxCoord, BoxCoord)>,
}

impl ExcitedDiagram {
    /// Each traced box moved weakly down-right along its diagonal.
    pub fn trace_is_diagonal(&self) -> bool {
        self.trace.len() == self.cells.len()
            && self
                .trace
                .iter()
                .all(|(a, b)| b.i >= a.i && b.i - a.i == b.j.wrapping_sub(a.j) && b.j >= a.j)
            && self.trace.iter().map(|(_, b)| *b).collect::<BTreeSet<_>>() == self.cells
    }

    pub fn hook_weight_product(&self) -> Poly {
        self.cells.iter().fold(Poly::one(), |acc, &b| {
            &acc * &hook_weight(&self.lambda, b).expect("cells lie in λ")
        })
    }
}

fn check_subset(lambda: &YoungDiagram, d: &BTreeSet<BoxCoord>) -> Result<(), ExcitedError> {
    if d.iter().all(|&b| lambda.contains_box(b)) {
        Ok(())
    } else {
        Err(ExcitedError::NotSubset(lambda.label()))
    }
}

/// Boxes `□_{i,j} ∈ D` whose neighbours `□_{i+1,j}`, `□_{i+1,j+1}`, `□_{i,j+1}` lie in `λ∖D`.
pub fn active_boxes(lambda: &YoungDiagram, d: &BTreeSet<BoxCoord>) -> Result<Vec<BoxCoord>, ExcitedError> {
    check_subset(lambda, d)?;
    let free = |i, j| {
        let c = BoxCoord::new(i, j);
        lambda.contains_box(c) && !d.contains(&c)
    };
    Ok(d.iter()
        .copied()
        .filter(|b| free(b.i + 1, b.j) && free(b.i + 1, b.j + 1) && free(b.i, b.j + 1))
        .collect())
}

/// Replaces the active box `b` by `□_{i+1,j+1}`.
pub fn excite(lambda: &YoungDiagram, d: &BTreeSet<BoxCoord>, b: BoxCoord) -> Result<BTreeSet<BoxCoord>, ExcitedError> {
    if !active_boxes(lambda, d)?.contains(&b) {
        return Err(ExcitedError::NotActive(b));
    }
    let mut out = d.clone();
    out.remove(&b);
    out.insert(BoxCoord::new(b.i + 1, b.j + 1));
    Ok(out)
}

/// `E(λ/μ)`: breadth-first closure of `boxes(μ)` under excitation, in discovery order.
pub fn enumerate_excited(lambda: &YoungDiagram, mu: &YoungDiagram) -> Result<Vec<ExcitedDiagram>, ExcitedError> {
    SkewShape::new(lambda.clone(), mu.clone())?;
    let start = mu.box_set();
    let start_trace: Vec<(BoxCoord, BoxCoord)> = start.iter().map(|&b| (b, b)).collect();
    let mut seen: HashMap<BTreeSet<BoxCoord>, usize> = HashMap::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone(), 0);
    out.push(ExcitedDiagram {
        lambda: lambda.clone(),
        cells: start,
        trace: start_trace,
    });
    queue.push_back(0usize);
    while let Some(idx) = queue.pop_front() {
        let cur = out[idx].clone();
        for b in active_boxes(lambda, &cur.cells)? {
            let next = excite(lambda, &cur.cells, b)?;
            if seen.contains_key(&next) {
                continue;
            }
            let moved = BoxCoord::new(b.i + 1, b.j + 1);
            let trace = cur
                .trace
                .iter()
                .map(|&(from, to)| (from, if to == b { moved } else { to }))
                .collect();
            seen.insert(next.clone(), out.len());
            queue.push_back(out.len());
            out.push(ExcitedDiagram {
                lambda: lambda.clone(),
                cells: next,
                trace,
            });
        }
    }
    Ok(out)
}

fn hook_reciprocal(lambda: &YoungDiagram) -> RatFunc {
    RatFunc::reciprocal_product(hook_weights(lambda).iter()).expect("hook weights are nonzero")
}

/// `Σ_{ν ∈ E(λ/μ)} Π_{□∈ν} h(□) / Π_{□∈λ} h(□)`.
pub fn g_excited(lambda: &YoungDiagram, mu: &YoungDiagram) -> Result<RatFunc, ExcitedError> {
    let mut num = Poly::zero();
    for e in enumerate_excited(lambda, mu)? {
        num = &num + &e.hook_weight_product();
    }
    Ok(&RatFunc::from(num) * &hook_reciprocal(lambda))
}

const CHAIN_BATCH: usize = 64;

/// Sums `f(chain)` over all saturated chains from `μ` to `λ` in batches.
fn chain_sum(
    lambda: &YoungDiagram,
    mu: &YoungDiagram,
    content: impl Fn(&SkewShape) -> Poly,
) -> Result<RatFunc, ExcitedError> {
    if lambda == mu {
        SkewShape::new(lambda.clone(), mu.clone())?;
        return Ok(RatFunc::one());
    }
    let mut acc = RatFunc::zero();
    let mut batch: Vec<RatFunc> = Vec::with_capacity(CHAIN_BATCH);
    for chain in saturated_chains(mu, lambda)? {
        let contents: Vec<Poly> = chain
            .iter()
            .map(|m| content(&SkewShape::new(lambda.clone(), m.clone()).expect("chain below λ")))
            .collect();
        batch.push(RatFunc::reciprocal_product(contents.iter())?);
        if batch.len() == CHAIN_BATCH {
            batch.push(acc);
            acc = RatFunc::sum(batch.iter());
            batch.clear();
        }
    }
    batch.push(acc);
    Ok(RatFunc::sum(batch.iter()))
}

/// `Σ_{μ=μ_1<...<μ_d<λ} 1/Π s_{λ/μ_i}`.
pub fn g_chain(lambda: &YoungDiagram, mu: &YoungDiagram) -> Result<RatFunc, ExcitedError> {
    chain_sum(lambda, mu, z_content)
}

/// `g_{λ/λ} = 1`, `g_{λ/μ} = (1/s_{λ/μ}) Σ_{μ'} g_{λ/μ'}` over the covers `μ'` of `μ` inside `λ`.
pub fn g_recurrence(lambda: &YoungDiagram, mu: &YoungDiagram, cache: &GTable) -> Result<RatFunc, ExcitedError> {
    let skew = SkewShape::new(lambda.clone(), mu.clone())?;
    if let Some(g) = cache.get(lambda, mu) {
        return Ok(g);
    }
    let g = if lambda == mu {
        RatFunc::one()
    } else {
        let s = z_content(&skew);
        assert!(!s.is_zero(), "z-content of a nonempty skew shape vanished");
        let parts = covers(mu, lambda)?
            .iter()
            .map(|m| g_recurrence(lambda, m, cache))
            .collect::<Result<Vec<_>, _>>()?;
        RatFunc::sum(parts.iter()).checked_div(&RatFunc::from(s))?
    };
    cache.insert(lambda, mu, g.clone(), Route::Recurrence);
    Ok(g)
}

/// Which computation produced a table entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Recurrence,
    Chain,
    Excited,
    Oracle,
}

impl Route {
    pub const COMPUTED: [Route; 3] = [Route::Recurrence, Route::Chain, Route::Excited];

    pub fn as_str(self) -> &'static str {
        match self {
            Route::Recurrence => "recurrence",
            Route::Chain => "chain",
            Route::Excited => "excited",
            Route::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Route {
    type Err = ExcitedError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "recurrence" => Ok(Route::Recurrence),
            "chain" => Ok(Route::Chain),
            "excited" => Ok(Route::Excited),
            "oracle" => Ok(Route::Oracle),
            _ => Err(ExcitedError::UnknownRoute(s.to_string())),
        }
    }
}

/// `g_{λ/μ}` by the named route (the oracle route lives in `verma`).
pub fn g_by_route(lambda: &YoungDiagram, mu: &YoungDiagram, route: Route) -> Result<RatFunc, ExcitedError> {
    match route {
        Route::Recurrence => g_recurrence(lambda, mu, &GTable::new()),
        Route::Chain => g_chain(lambda, mu),
        Route::Excited => g_excited(lambda, mu),
        Route::Oracle => Err(ExcitedError::UnknownRoute("oracle".into())),
    }
}

type Key = (Ambient, Vec<usize>, Vec<usize>);

/// Shared memo of `g_{λ/μ}` values with the route that produced each one.
/// Inserts are idempotent: the first value stored for a key is kept.
#[derive(Debug, Default)]
pub struct GTable {
    entries: RwLock<HashMap<Key, (RatFunc, Route)>>,
}

pub const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheDoc {
    version: u32,
    entries: BTreeMap<String, CacheEntry>,
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    g: RatFunc,
    route: Route,
}

fn key(lambda: &YoungDiagram, mu: &YoungDiagram) -> Key {
    (lambda.ambient(), lambda.tuple().to_vec(), mu.tuple().to_vec())
}

impl GTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, lambda: &YoungDiagram, mu: &YoungDiagram) -> Option<RatFunc> {
        self.entries.read().expect("lock").get(&key(lambda, mu)).map(|(g, _)| g.clone())
    }

    pub fn get_with_route(&self, lambda: &YoungDiagram, mu: &YoungDiagram) -> Option<(RatFunc, Route)> {
        self.entries.read().expect("lock").get(&key(lambda, mu)).cloned()
    }

    pub fn insert(&self, lambda: &YoungDiagram, mu: &YoungDiagram, g: RatFunc, route: Route) {
        self.entries
            .write()
            .expect("lock")
            .entry(key(lambda, mu))
            .or_insert((g, route));
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entries as `(λ, μ, g, route)`, sorted by diagram order.
    pub fn entries(&self) -> Vec<(YoungDiagram, YoungDiagram, RatFunc, Route)> {
        let map = self.entries.read().expect("lock");
        let mut out: Vec<_> = map
            .iter()
            .map(|((a, l, m), (g, route))| {
                (
                    YoungDiagram::new(*a, l.clone()).expect("stored tuple"),
                    YoungDiagram::new(*a, m.clone()).expect("stored tuple"),
                    g.clone(),
                    *route,
                )
            })
            .collect();
        out.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
        out
    }

    /// `"n/r/lambda/mu"`, e.g. `"4/2/2,2/0,1"`.
    pub fn cache_key(lambda: &YoungDiagram, mu: &YoungDiagram) -> String {
        let a = lambda.ambient();
        format!("{}/{}/{}/{}", a.n(), a.r(), lambda.cli_arg(), mu.cli_arg())
    }

    pub fn to_json(&self) -> String {
        let entries = self
            .entries()
            .into_iter()
            .map(|(l, m, g, route)| (Self::cache_key(&l, &m), CacheEntry { g, route }))
            .collect();
        serde_json::to_string_pretty(&CacheDoc {
            version: CACHE_VERSION,
            entries,
        })
        .expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, ExcitedError> {
        let doc: CacheDoc = serde_json::from_str(s).map_err(|e| ExcitedError::Cache(e.to_string()))?;
        if doc.version != CACHE_VERSION {
            return Err(ExcitedError::Cache(format!(
                "version {} (expected {CACHE_VERSION})",
                doc.version
            )));
        }
        let table = GTable::new();
        for (k, e) in doc.entries {
            let (lambda, mu) = parse_cache_key(&k)?;
            if lambda == mu && !e.g.equal(&RatFunc::one()) {
                return Err(ExcitedError::Cache(format!("entry {k} should be 1")));
            }
            table.insert(&lambda, &mu, e.g, e.route);
        }
        Ok(table)
    }
}

fn parse_cache_key(k: &str) -> Result<(YoungDiagram, YoungDiagram), ExcitedError> {
    let bad = || ExcitedError::Cache(format!("bad key {k:?}"));
    let parts: Vec<&str> = k.split('/').collect();
    if parts.len() != 4 {
        return Err(bad());
    }
    let n: usize = parts[0].parse().map_err(|_| bad())?;
    let r: usize = parts[1].parse().map_err(|_| bad())?;
    let ambient = Ambient::new(n, r)?;
    let tuple = |s: &str| -> Result<Vec<usize>, ExcitedError> {
        s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
    };
    let lambda = YoungDiagram::new(ambient, tuple(parts[2])?)?;
    let mu = YoungDiagram::new(ambient, tuple(parts[3])?)?;
    SkewShape::new(lambda.clone(), mu.clone())?;
    Ok((lambda, mu))
}

/// All pairs `μ <= λ` of an ambient, `λ` outer.
pub fn all_pairs(ambient: Ambient) -> Vec<(YoungDiagram, YoungDiagram)> {
    let ds = crate::diagrams::all_diagrams(ambient);
    let mut out = Vec::new();
    for l in &ds {
        for m in &ds {
            if m.le(l).expect("same ambient") {
                out.push((l.clone(), m.clone()));
            }
        }
    }
    out
}

/// A pair on which the routes disagree.
#[derive(Clone, Debug, Serialize)]
pub struct RouteMismatch {
    pub lambda: YoungDiagram,
    pub mu: YoungDiagram,
    pub values: Vec<(Route, RatFunc)>,
}

/// Compares recurrence, chain and excited values on every pair of `ambient`.
pub fn three_way_check(ambient: Ambient) -> Result<(usize, Vec<RouteMismatch>), ExcitedError> {
    let cache = GTable::new();
    let mut checked = 0;
    let mut bad = Vec::new();
    for (l, m) in all_pairs(ambient) {
        let rec = g_recurrence(&l, &m, &cache)?;
        let ch = g_chain(&l, &m)?;
        let ex = g_excited(&l, &m)?;
        checked += 1;
        if !(rec.equal(&ch) && rec.equal(&ex)) {
            bad.push(RouteMismatch {
                lambda: l,
                mu: m,
                values: vec![(Route::Recurrence, rec), (Route::Chain, ch), (Route::Excited, ex)],
            });
        }
    }
    Ok((checked, bad))
}

/// Leading behaviour of `g_{λ/∅}` when every `z_i` equals `N`.
#[derive(Clone, Debug, Serialize)]
pub struct HookLimit {
    pub lambda: YoungDiagram,
    pub hook_lengths: Vec<usize>,
    pub degree: i64,
    #[serde(with = "crate::symbolic::rational_str")]
    pub coefficient: BigRational,
    /// `degree = -|λ|` and `coefficient = 1/Π hook lengths`.
    pub check: bool,
    pub syt_count: u128,
    /// `|λ|! · coefficient`.
    #[serde(with = "crate::symbolic::rational_str")]
    pub syt_from_limit: BigRational,
    pub syt_check: bool,
}

pub fn hook_length_limit(lambda: &YoungDiagram) -> Result<HookLimit, ExcitedError> {
    let n = lambda.ambient().n();
    let all_n: BTreeMap<Var, Poly> = (1..n).map(|m| (Var::Z(m as u16), Poly::var(Var::N))).collect();
    let empty = YoungDiagram::empty(lambda.ambient());
    let g = chain_sum(lambda, &empty, |sk| z_content(sk).substitute(&all_n))?;
    let (degree, coefficient) = g.leading_in_n()?;
    let lengths = hook_lengths(lambda);
    let prod: BigInt = lengths.iter().map(|&h| BigInt::from(h)).product();
    let check = degree == -(lambda.size() as i64) && coefficient == BigRational::new(BigInt::one(), prod);
    let fact: BigInt = (1..=lambda.size()).map(BigInt::from).product();
    let syt_from_limit = &coefficient * BigRational::from_integer(fact);
    let syt = syt_count(lambda);
    let syt_check = syt_from_limit.is_integer() && syt_from_limit.to_integer().to_u128() == Some(syt);
    Ok(HookLimit {
        lambda: lambda.clone(),
        hook_lengths: lengths,
        degree,
        coefficient,
        check,
        syt_count: syt,
        syt_from_limit,
        syt_check,
    })
}
