use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{AlgoError, FormatError};
use crate::graph::VertexId;
use crate::runtime::{Context, JobInfo, MapSum, Program};
use crate::subgraph::Subgraph;

pub const MAX_PATTERN_VERTICES: usize = 64;

/// A small labeled pattern graph. Pattern vertices are addressed by ordinal
/// (position in ascending id order).
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    ids: Vec<VertexId>,
    labels: Vec<String>,
    out: Vec<Vec<usize>>,
}

impl Pattern {
    pub fn new(
        vertices: impl IntoIterator<Item = (VertexId, String)>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, AlgoError> {
        let vertices: BTreeMap<VertexId, String> = vertices.into_iter().collect();
        if vertices.is_empty() {
            return Err(AlgoError::Config("pattern has no vertices".into()));
        }
        if vertices.len() > MAX_PATTERN_VERTICES {
            return Err(AlgoError::Config(format!(
                "pattern has {} vertices, at most {MAX_PATTERN_VERTICES} supported",
                vertices.len()
            )));
        }
        let ids: Vec<VertexId> = vertices.keys().copied().collect();
        let ord = |v: VertexId| {
            ids.binary_search(&v).map_err(|_| {
                AlgoError::Config(format!("pattern edge endpoint {v} is not a pattern vertex"))
            })
        };
        let mut out: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ids.len()];
        for (s, d) in edges {
            out[ord(s)?].insert(ord(d)?);
        }
        Ok(Pattern {
            labels: vertices.into_values().collect(),
            out: out.into_iter().map(|s| s.into_iter().collect()).collect(),
            ids,
        })
    }

    /// Parses `v <id> <label>` and `e <src> <dst>` lines; `#` starts a
    /// comment line.
    pub fn parse(text: &str, path: &Path) -> Result<Self, FormatError> {
        let err = |line: usize, msg: String| FormatError::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        };
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let id = |t: &str| {
                t.parse::<VertexId>()
                    .map_err(|e| err(i + 1, format!("bad vertex id {t:?}: {e}")))
            };
            match toks.as_slice() {
                ["v", v, label] => vertices.push((id(v)?, label.to_string())),
                ["e", s, d] => edges.push((id(s)?, id(d)?)),
                _ => {
                    return Err(err(
                        i + 1,
                        format!("expected `v <id> <label>` or `e <src> <dst>`, got {line:?}"),
                    ))
                }
            }
        }
        Pattern::new(vertices, edges).map_err(|e| err(0, e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, FormatError> {
        let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn label(&self, ordinal: usize) -> &str {
        &self.labels[ordinal]
    }

    pub fn successors(&self, ordinal: usize) -> &[usize] {
        &self.out[ordinal]
    }

    /// Bit mask of the pattern vertices carrying `label`.
    pub fn matching(&self, label: &str) -> u64 {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| *l == label)
            .fold(0, |m, (i, _)| m | 1 << i)
    }
}

/// Graph simulation: the maximal relation `sim ⊆ V_Q × V` with matching
/// labels such that for `v ∈ sim(u)` and every pattern edge `u → u'`, some
/// out-neighbor of `v` is in `sim(u')`.
///
/// `post(v)[u']` counts the out-neighbors of `v` currently in `sim(u')`.
/// An internal vertex sees all of its out-edges, so its counters are kept
/// locally; a frontier vertex's counters are only ever changed by the
/// merged inbox, and local changes to them are emitted as deltas instead.
#[derive(Debug, Clone)]
pub struct GraphSimulation {
    pub pattern: Pattern,
}

impl GraphSimulation {
    pub fn new(pattern: Pattern) -> Self {
        GraphSimulation { pattern }
    }

    /// Turns per-vertex match masks into one vertex set per pattern vertex,
    /// keyed by pattern vertex id.
    pub fn sim_sets(
        &self,
        masks: &BTreeMap<VertexId, u64>,
    ) -> BTreeMap<VertexId, BTreeSet<VertexId>> {
        let mut sets: BTreeMap<VertexId, BTreeSet<VertexId>> = self
            .pattern
            .ids
            .iter()
            .map(|&u| (u, BTreeSet::new()))
            .collect();
        for (&v, &m) in masks {
            for (i, &u) in self.pattern.ids.iter().enumerate() {
                if m >> i & 1 == 1 {
                    sets.get_mut(&u).expect("all pattern ids present").insert(v);
                }
            }
        }
        sets
    }
}

pub struct GsimState {
    k: usize,
    sim: Vec<u64>,
    post: Vec<i64>,
    delta: Vec<i64>,
    work: Vec<usize>,
}

impl GsimState {
    fn bump(&mut self, sg: &Subgraph, v: usize, u: usize, by: i64) {
        for (w, _) in sg.in_edges(v) {
            if sg.is_frontier(w) {
                self.delta[w * self.k + u] += by;
            } else {
                let c = &mut self.post[w * self.k + u];
                *c += by;
                if *c == 0 {
                    self.work.push(w);
                }
            }
        }
    }

    fn prune(&mut self, sg: &Subgraph, q: &Pattern) {
        while let Some(v) = self.work.pop() {
            let mut mask = self.sim[v];
            while mask != 0 {
                let u = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                let post = &self.post[v * self.k..(v + 1) * self.k];
                if q.out[u].iter().any(|&u2| post[u2] == 0) {
                    self.sim[v] &= !(1 << u);
                    self.bump(sg, v, u, -1);
                }
            }
        }
    }
}

impl Program for GraphSimulation {
    type Value = Vec<i64>;
    type Agg = MapSum;
    type State = GsimState;
    /// Bit `i` set when the vertex simulates pattern ordinal `i`.
    type Output = u64;

    fn name(&self) -> &'static str {
        "gsim"
    }

    fn aggregator(&self) -> &MapSum {
        &MapSum
    }

    fn prepare(&self, subgraphs: &[Subgraph]) -> Result<(), AlgoError> {
        let labeled = subgraphs
            .iter()
            .any(|sg| sg.vertex_infos().iter().any(|v| v.label.is_some()));
        if !labeled {
            return Err(AlgoError::Config(
                "graph simulation needs a labeled graph".into(),
            ));
        }
        Ok(())
    }

    fn init(&self, sg: &Subgraph, _job: &JobInfo) -> Result<GsimState, AlgoError> {
        let k = self.pattern.len();
        let n = sg.num_vertices();
        Ok(GsimState {
            k,
            sim: sg
                .vertex_infos()
                .iter()
                .map(|v| v.label.as_deref().map_or(0, |l| self.pattern.matching(l)))
                .collect(),
            post: vec![0; n * k],
            delta: vec![0; n * k],
            work: Vec::new(),
        })
    }

    fn compute(
        &self,
        sg: &Subgraph,
        st: &mut GsimState,
        inbox: &[(VertexId, Vec<i64>)],
        ctx: &mut Context<'_, Vec<i64>>,
    ) -> Result<(), AlgoError> {
        let k = st.k;
        let first = ctx.superstep() == 0;
        if first {
            for v in 0..sg.num_vertices() {
                let mut mask = st.sim[v];
                while mask != 0 {
                    let u = mask.trailing_zeros() as usize;
                    mask &= mask - 1;
                    st.bump(sg, v, u, 1);
                }
            }
            // Internal counters are complete now; frontier ones are not.
            st.work.clear();
            st.work
                .extend((0..sg.num_vertices()).filter(|&v| !sg.is_frontier(v) && st.sim[v] != 0));
        }
        for (key, d) in inbox {
            let v = sg
                .local_index(*key)
                .ok_or_else(|| AlgoError::Failed(format!("inbox key {key} not local")))?;
            if d.len() > k {
                return Err(AlgoError::Failed(format!(
                    "counter vector of length {} for {k} pattern vertices",
                    d.len()
                )));
            }
            for (c, x) in st.post[v * k..].iter_mut().zip(d) {
                *c += x;
            }
            st.work.push(v);
        }
        st.prune(sg, &self.pattern);

        let mut emitted = false;
        for v in sg.frontier_locals() {
            let d = &mut st.delta[v * k..(v + 1) * k];
            if first || d.iter().any(|&x| x != 0) {
                ctx.add_pair(sg.id_of(v), d.to_vec());
                d.fill(0);
                emitted = true;
            }
        }
        if !emitted {
            ctx.vote_to_halt();
        }
        Ok(())
    }

    fn output(&self, _sg: &Subgraph, st: &GsimState, local: usize) -> u64 {
        st.sim[local]
    }

    fn outputs_agree(&self, a: &u64, b: &u64) -> bool {
        a == b
    }

    fn format_output(&self, out: &u64) -> String {
        let ids: Vec<String> = (0..self.pattern.len())
            .filter(|i| out >> i & 1 == 1)
            .map(|i| self.pattern.ids[i].to_string())
            .collect();
        if ids.is_empty() {
            "-".to_string()
        } else {
            ids.join(",")
        }
    }
}
