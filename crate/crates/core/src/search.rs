//! Exhaustive search for labelings over a finite ground set.
//!
//! Vertices are fixed in descending-degree order (ties by name). Candidate
//! labels are the non-empty subsets of the ground set, smallest first and
//! then by bit pattern, optionally filtered by size. A branch is cut as soon
//! as a vertex label repeats, an edge label repeats, or a newly fixed edge
//! breaks the requested size class. Running out of branches is therefore a
//! proof that no labeling exists within the spec.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::labeling::{verify, LabelingError, SetLabeling, VerificationReport};
use crate::setcore::{IntSet, SetError};

/// Ground sets are enumerated exhaustively, so their size is capped.
pub const MAX_GROUND_SIZE: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("the graph has no vertices")]
    EmptyGraph,
    #[error("vertex count must be at least 1")]
    ZeroVertices,
    #[error("label size must be at least 1")]
    ZeroLabelSize,
    #[error("uniform label size {size} exceeds the ground set size {ground}")]
    UniformTooLarge { size: usize, ground: usize },
    #[error("ground set has {0} elements; at most {MAX_GROUND_SIZE} are supported")]
    GroundTooLarge(usize),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Labeling(#[from] LabelingError),
    #[error("search produced a labeling that fails verification in mode {0}")]
    Unsound(Mode),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Iasi,
    Weak,
    Strong,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Iasi, Mode::Weak, Mode::Strong];

    pub fn accepts(self, report: &VerificationReport) -> bool {
        match self {
            Mode::Iasi => report.is_iasi,
            Mode::Weak => report.is_weak_iasi(),
            Mode::Strong => report.is_strong_iasi(),
        }
    }

    fn edge_ok(self, left: usize, right: usize, sum: usize) -> bool {
        match self {
            Mode::Iasi => true,
            Mode::Weak => sum == left.max(right),
            Mode::Strong => sum == left * right,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Iasi => "iasi",
            Mode::Weak => "weak",
            Mode::Strong => "strong",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "iasi" => Ok(Mode::Iasi),
            "weak" => Ok(Mode::Weak),
            "strong" => Ok(Mode::Strong),
            other => Err(format!(
                "unknown mode {other:?} (expected iasi, weak or strong)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub mode: Mode,
    pub ground: IntSet,
    pub max_label_size: Option<usize>,
    pub uniform_vertex_size: Option<usize>,
    pub time_budget: Option<Duration>,
    /// Cap on accepted partial assignments; exceeding it reports `Timeout`
    /// deterministically, unlike `time_budget`.
    pub node_budget: Option<u64>,
}

impl SearchSpec {
    pub fn new(mode: Mode, ground: IntSet) -> Self {
        SearchSpec {
            mode,
            ground,
            max_label_size: None,
            uniform_vertex_size: None,
            time_budget: None,
            node_budget: None,
        }
    }

    /// Ground set `{0, 1, ..., m - 1}` under `bound`.
    pub fn prefix(mode: Mode, m: usize, bound: u32) -> Result<Self, SearchError> {
        Ok(Self::new(mode, prefix_ground(m, bound)?))
    }

    pub fn uniform(mut self, l: usize) -> Self {
        self.uniform_vertex_size = Some(l);
        self
    }

    pub fn max_label_size(mut self, k: usize) -> Self {
        self.max_label_size = Some(k);
        self
    }

    pub fn budget(mut self, budget: Duration) -> Self {
        self.time_budget = Some(budget);
        self
    }

    pub fn node_budget(mut self, nodes: u64) -> Self {
        self.node_budget = Some(nodes);
        self
    }

    fn validate(&self) -> Result<(), SearchError> {
        let k = self.ground.len();
        if k > MAX_GROUND_SIZE {
            return Err(SearchError::GroundTooLarge(k));
        }
        if self.max_label_size == Some(0) || self.uniform_vertex_size == Some(0) {
            return Err(SearchError::ZeroLabelSize);
        }
        if let Some(l) = self.uniform_vertex_size {
            if l > k {
                return Err(SearchError::UniformTooLarge { size: l, ground: k });
            }
        }
        // every edge label must fit under the bound
        let top = 2 * u64::from(self.ground.largest());
        if top > u64::from(self.ground.bound()) {
            return Err(SetError::BoundExceeded {
                element: top,
                bound: self.ground.bound(),
            }
            .into());
        }
        Ok(())
    }
}

pub fn prefix_ground(m: usize, bound: u32) -> Result<IntSet, SearchError> {
    if m == 0 {
        return Err(SetError::Empty.into());
    }
    Ok(IntSet::new(0..m as u32, bound)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Found,
    Exhausted,
    /// The time or node budget ran out first.
    Timeout,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Found => "found",
            Status::Exhausted => "exhausted",
            Status::Timeout => "timeout",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub status: Status,
    pub labeling: Option<SetLabeling>,
    pub nodes_expanded: u64,
    pub report: Option<VerificationReport>,
}

/// Smallest `m` with `2^m >= n + 1`.
pub fn ground_set_lower_bound(n: usize) -> Result<usize, SearchError> {
    if n == 0 {
        return Err(SearchError::ZeroVertices);
    }
    let target = n as u128 + 1;
    Ok((0..)
        .find(|&m| (1u128 << m) >= target)
        .expect("n fits in u128"))
}

/// Smallest `m` with `C(m, l) >= n`.
pub fn uniform_ground_set_lower_bound(n: usize, l: usize) -> Result<usize, SearchError> {
    if n == 0 {
        return Err(SearchError::ZeroVertices);
    }
    if l == 0 {
        return Err(SearchError::ZeroLabelSize);
    }
    let mut m = l;
    while binomial(m, l) < n as u128 {
        m += 1;
    }
    Ok(m)
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Non-empty subsets of `ground` allowed by `spec`, in search order.
pub fn candidate_labels(spec: &SearchSpec) -> Result<Vec<IntSet>, SearchError> {
    spec.validate()?;
    let elements = spec.ground.to_vec();
    let k = elements.len();
    let mut masks: Vec<u64> = (1u64..(1u64 << k))
        .filter(|m| {
            let size = m.count_ones() as usize;
            spec.uniform_vertex_size.is_none_or(|l| size == l)
                && spec.max_label_size.is_none_or(|c| size <= c)
        })
        .collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks
        .into_iter()
        .map(|m| {
            let members = (0..k).filter(|b| m & (1 << b) != 0).map(|b| elements[b]);
            Ok(IntSet::new(members, spec.ground.bound())?)
        })
        .collect()
}

/// Descending degree, ties broken by name.
pub fn search_order(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by(|&a, &b| {
        g.degree_idx(b)
            .cmp(&g.degree_idx(a))
            .then_with(|| g.name(a).cmp(g.name(b)))
    });
    order
}

struct Searcher<'a> {
    mode: Mode,
    order: Vec<usize>,
    // for each search position, neighbours fixed at earlier positions
    back_edges: Vec<Vec<usize>>,
    cands: &'a [IntSet],
    assigned: Vec<usize>,
    used_label: Vec<bool>,
    used_edges: HashSet<IntSet>,
    nodes: u64,
    ticks: u64,
    node_budget: Option<u64>,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Searcher<'_> {
    fn dfs(&mut self, pos: usize) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let v = self.order[pos];
        let mut fresh: Vec<IntSet> = Vec::with_capacity(self.back_edges[pos].len());
        for c in 0..self.cands.len() {
            if self.used_label[c] {
                continue;
            }
            self.ticks += 1;
            if self.ticks & 0x3ff == 0 {
                if let Some(d) = self.deadline {
                    if Instant::now() >= d {
                        self.timed_out = true;
                        return false;
                    }
                }
            }
            fresh.clear();
            let label = &self.cands[c];
            let mut ok = true;
            for &w in &self.back_edges[pos] {
                let other = &self.cands[self.assigned[w]];
                let sum = label.sumset(other).expect("bounds validated up front");
                if !self.mode.edge_ok(label.len(), other.len(), sum.len())
                    || self.used_edges.contains(&sum)
                    || fresh.contains(&sum)
                {
                    ok = false;
                    break;
                }
                fresh.push(sum);
            }
            if !ok {
                continue;
            }
            self.nodes += 1;
            if self.node_budget.is_some_and(|b| self.nodes > b) {
                self.timed_out = true;
                return false;
            }
            self.assigned[v] = c;
            self.used_label[c] = true;
            let added: Vec<IntSet> = std::mem::take(&mut fresh);
            for s in &added {
                self.used_edges.insert(s.clone());
            }
            if self.dfs(pos + 1) {
                return true;
            }
            for s in &added {
                self.used_edges.remove(s);
            }
            self.used_label[c] = false;
            if self.timed_out {
                return false;
            }
        }
        false
    }
}

fn run_search(
    g: &Graph,
    spec: &SearchSpec,
    deadline: Option<Instant>,
) -> Result<SearchOutcome, SearchError> {
    if g.vertex_count() == 0 {
        return Err(SearchError::EmptyGraph);
    }
    let cands = candidate_labels(spec)?;
    let order = search_order(g);
    let mut position = vec![0usize; g.vertex_count()];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }
    let back_edges = order
        .iter()
        .enumerate()
        .map(|(p, &v)| g.neighbor_indices(v).filter(|&w| position[w] < p).collect())
        .collect();
    let mut s = Searcher {
        mode: spec.mode,
        order,
        back_edges,
        cands: &cands,
        assigned: vec![usize::MAX; g.vertex_count()],
        used_label: vec![false; cands.len()],
        used_edges: HashSet::new(),
        nodes: 0,
        ticks: 0,
        node_budget: spec.node_budget,
        deadline,
        timed_out: false,
    };
    let found = s.dfs(0);
    if !found {
        return Ok(SearchOutcome {
            status: if s.timed_out {
                Status::Timeout
            } else {
                Status::Exhausted
            },
            labeling: None,
            nodes_expanded: s.nodes,
            report: None,
        });
    }
    let labeling: SetLabeling = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(v, name)| (name.clone(), cands[s.assigned[v]].clone()))
        .collect();
    let report = verify(g, &labeling)?;
    if !spec.mode.accepts(&report) {
        return Err(SearchError::Unsound(spec.mode));
    }
    Ok(SearchOutcome {
        status: Status::Found,
        labeling: Some(labeling),
        nodes_expanded: s.nodes,
        report: Some(report),
    })
}

/// Looks for a labeling of `g` satisfying `spec`. The first labeling in
/// search order is returned, so results are reproducible.
pub fn find_labeling(g: &Graph, spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    let deadline = spec.time_budget.map(|b| Instant::now() + b);
    run_search(g, spec, deadline)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimizeOptions {
    pub mode: Mode,
    /// Largest ground size tried.
    pub max_ground: usize,
    pub uniform_vertex_size: Option<usize>,
    pub max_label_size: Option<usize>,
    pub time_budget: Option<Duration>,
    /// Per ground set tried.
    pub node_budget: Option<u64>,
    pub universe_bound: u32,
}

impl MinimizeOptions {
    pub fn new(mode: Mode) -> Self {
        MinimizeOptions {
            mode,
            max_ground: 12,
            uniform_vertex_size: None,
            max_label_size: None,
            time_budget: None,
            node_budget: None,
            universe_bound: crate::setcore::DEFAULT_UNIVERSE_BOUND,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalGround {
    /// Counting bound the search started from.
    pub lower_bound: usize,
    /// Smallest ground size that admits a labeling, when one was found.
    pub minimum: Option<usize>,
    /// Ground set of the witness.
    pub ground: Option<IntSet>,
    /// `(ground size, status)` for every size tried.
    pub attempts: Vec<(usize, Status)>,
    pub outcome: SearchOutcome,
}

fn start_size(n: usize, opts: &MinimizeOptions) -> Result<usize, SearchError> {
    let mut lb = ground_set_lower_bound(n)?;
    if let Some(l) = opts.uniform_vertex_size {
        lb = lb.max(uniform_ground_set_lower_bound(n, l)?);
    }
    Ok(lb)
}

/// Smallest `m` such that the prefix `{0..m-1}` admits a labeling, trying
/// sizes upward from the counting bound.
pub fn minimal_ground_set(g: &Graph, opts: &MinimizeOptions) -> Result<MinimalGround, SearchError> {
    if g.vertex_count() == 0 {
        return Err(SearchError::EmptyGraph);
    }
    let lower_bound = start_size(g.vertex_count(), opts)?;
    minimize_over(g, opts, lower_bound, |m| {
        Ok(vec![prefix_ground(m, opts.universe_bound)?])
    })
}

/// Like [`minimal_ground_set`], but tries every `m`-subset of `{0..=cap}`
/// rather than only the prefix. Only sensible for tiny instances.
pub fn minimal_ground_set_exact(
    g: &Graph,
    opts: &MinimizeOptions,
    cap: u32,
) -> Result<MinimalGround, SearchError> {
    if g.vertex_count() == 0 {
        return Err(SearchError::EmptyGraph);
    }
    let lower_bound = start_size(g.vertex_count(), opts)?;
    minimize_over(g, opts, lower_bound, |m| {
        let mut grounds = Vec::new();
        let pool: Vec<u32> = (0..=cap).collect();
        let mut idx: Vec<usize> = (0..m).collect();
        if m > pool.len() {
            return Ok(grounds);
        }
        loop {
            grounds.push(IntSet::new(
                idx.iter().map(|&i| pool[i]),
                opts.universe_bound,
            )?);
            // next m-combination in lexicographic order
            let Some(i) = (0..m).rev().find(|&i| idx[i] != i + pool.len() - m) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..m {
                idx[j] = idx[j - 1] + 1;
            }
        }
        Ok(grounds)
    })
}

fn minimize_over<F>(
    g: &Graph,
    opts: &MinimizeOptions,
    lower_bound: usize,
    grounds_of_size: F,
) -> Result<MinimalGround, SearchError>
where
    F: Fn(usize) -> Result<Vec<IntSet>, SearchError>,
{
    let deadline = opts.time_budget.map(|b| Instant::now() + b);
    let mut attempts = Vec::new();
    let mut last = SearchOutcome {
        status: Status::Exhausted,
        labeling: None,
        nodes_expanded: 0,
        report: None,
    };
    let mut nodes = 0;
    for m in lower_bound..=opts.max_ground {
        let mut status = Status::Exhausted;
        for ground in grounds_of_size(m)? {
            let spec = SearchSpec {
                mode: opts.mode,
                ground: ground.clone(),
                max_label_size: opts.max_label_size,
                uniform_vertex_size: opts.uniform_vertex_size,
                time_budget: None,
                node_budget: opts.node_budget,
            };
            if spec.uniform_vertex_size.is_some_and(|l| l > m) {
                continue;
            }
            let mut outcome = run_search(g, &spec, deadline)?;
            nodes += outcome.nodes_expanded;
            outcome.nodes_expanded = nodes;
            status = outcome.status;
            match status {
                Status::Found => {
                    attempts.push((m, status));
                    return Ok(MinimalGround {
                        lower_bound,
                        minimum: Some(m),
                        ground: Some(ground),
                        attempts,
                        outcome,
                    });
                }
                Status::Timeout => {
                    attempts.push((m, status));
                    return Ok(MinimalGround {
                        lower_bound,
                        minimum: None,
                        ground: None,
                        attempts,
                        outcome,
                    });
                }
                Status::Exhausted => last = outcome,
            }
        }
        attempts.push((m, status));
    }
    Ok(MinimalGround {
        lower_bound,
        minimum: None,
        ground: None,
        attempts,
        outcome: last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::DEFAULT_UNIVERSE_BOUND as B;

    #[test]
    fn lower_bounds() {
        assert_eq!(ground_set_lower_bound(7).unwrap(), 3);
        assert_eq!(ground_set_lower_bound(1).unwrap(), 1);
        assert_eq!(ground_set_lower_bound(8).unwrap(), 4);
        assert_eq!(ground_set_lower_bound(0), Err(SearchError::ZeroVertices));

        assert_eq!(uniform_ground_set_lower_bound(6, 2).unwrap(), 4);
        assert_eq!(uniform_ground_set_lower_bound(1, 1).unwrap(), 1);
        assert_eq!(uniform_ground_set_lower_bound(11, 2).unwrap(), 6);
        assert_eq!(
            uniform_ground_set_lower_bound(3, 0),
            Err(SearchError::ZeroLabelSize)
        );
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(40, 20), 137_846_528_820);
    }

    #[test]
    fn candidate_order() {
        let spec = SearchSpec::prefix(Mode::Iasi, 3, B).unwrap();
        let got: Vec<String> = candidate_labels(&spec)
            .unwrap()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(
            got,
            ["{0}", "{1}", "{2}", "{0,1}", "{0,2}", "{1,2}", "{0,1,2}"]
        );
        let got = candidate_labels(&spec.clone().uniform(2)).unwrap();
        assert_eq!(got.len(), 3);
        let got = candidate_labels(&spec.max_label_size(1)).unwrap();
        assert_eq!(got.len(), 3);
    }

    #[test]
    fn order_is_degree_then_name() {
        let g = Graph::parse("c x\nc y\nb a\nb c").unwrap();
        let names: Vec<&str> = search_order(&g).into_iter().map(|i| g.name(i)).collect();
        assert_eq!(names, ["c", "b", "a", "x", "y"]);
    }

    #[test]
    fn small_searches() {
        let k2 = Graph::parse("a b").unwrap();
        let out = find_labeling(&k2, &SearchSpec::prefix(Mode::Iasi, 2, B).unwrap()).unwrap();
        assert_eq!(out.status, Status::Found);
        let f = out.labeling.unwrap();
        assert_eq!(f.get("a").unwrap().to_string(), "{0}");
        assert_eq!(f.get("b").unwrap().to_string(), "{1}");

        let k3 = Graph::parse("a b\nb c\na c").unwrap();
        let out = find_labeling(&k3, &SearchSpec::prefix(Mode::Iasi, 1, B).unwrap()).unwrap();
        assert_eq!(out.status, Status::Exhausted);
    }

    #[test]
    fn invalid_specs() {
        let k2 = Graph::parse("a b").unwrap();
        let spec = SearchSpec::prefix(Mode::Iasi, 2, B).unwrap().uniform(3);
        assert!(matches!(
            find_labeling(&k2, &spec),
            Err(SearchError::UniformTooLarge { size: 3, ground: 2 })
        ));
        assert!(matches!(
            find_labeling(
                &Graph::new(),
                &SearchSpec::prefix(Mode::Iasi, 2, B).unwrap()
            ),
            Err(SearchError::EmptyGraph)
        ));
        let wide = SearchSpec::prefix(Mode::Iasi, 21, B).unwrap();
        assert!(matches!(
            find_labeling(&k2, &wide),
            Err(SearchError::GroundTooLarge(21))
        ));
        let tight = SearchSpec::new(Mode::Iasi, IntSet::new([0, 6], 10).unwrap());
        assert!(matches!(
            find_labeling(&k2, &tight),
            Err(SearchError::Set(_))
        ));
        assert!(prefix_ground(0, B).is_err());
    }

    #[test]
    fn minimal_grounds() {
        let k2 = Graph::parse("a b").unwrap();
        let r = minimal_ground_set(&k2, &MinimizeOptions::new(Mode::Iasi)).unwrap();
        assert_eq!((r.lower_bound, r.minimum), (2, Some(2)));

        let k1 = Graph::parse("vertex a").unwrap();
        let r = minimal_ground_set(&k1, &MinimizeOptions::new(Mode::Strong)).unwrap();
        assert_eq!(r.minimum, Some(1));

        let k3 = Graph::parse("a b\nb c\na c").unwrap();
        let r = minimal_ground_set(&k3, &MinimizeOptions::new(Mode::Iasi)).unwrap();
        assert!(r.minimum.unwrap() >= r.lower_bound);
        assert!(r.outcome.report.unwrap().is_iasi);
    }

    #[test]
    fn exact_never_beats_counting_bound_and_never_loses_to_prefix() {
        let g = Graph::parse("a b\nb c\nc d\nd a\na c").unwrap();
        for mode in Mode::ALL {
            let opts = MinimizeOptions::new(mode);
            let prefix = minimal_ground_set(&g, &opts).unwrap();
            let exact = minimal_ground_set_exact(&g, &opts, 6).unwrap();
            let (p, e) = (prefix.minimum.unwrap(), exact.minimum.unwrap());
            assert!(
                e <= p && e >= exact.lower_bound,
                "{mode}: exact {e}, prefix {p}"
            );
            assert_eq!(exact.ground.unwrap().len(), e);
        }
    }

    #[test]
    fn timeout_is_reported() {
        let mut g = Graph::new();
        for i in 0..9 {
            for j in i + 1..9 {
                g.ensure_vertex(&format!("v{i}")).unwrap();
                g.ensure_vertex(&format!("v{j}")).unwrap();
                g.add_edge(&format!("v{i}"), &format!("v{j}")).unwrap();
            }
        }
        let spec = SearchSpec::prefix(Mode::Strong, 12, B)
            .unwrap()
            .uniform(3)
            .budget(Duration::from_millis(1));
        // either it times out or, if the machine is fast, finds a witness
        let out = find_labeling(&g, &spec).unwrap();
        assert_ne!(out.status, Status::Exhausted);
    }
}
