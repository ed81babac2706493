use rand::distr::Uniform;

use super::edge_list::EdgeList;
use crate::error::{Error, Result};

/// Topology plus zealot placement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkSpec {
    /// Every node is adjacent to every other; `n_free` free voters followed
    /// by `zealots_correct` and `zealots_incorrect` pinned nodes.
    Complete {
        n_free: usize,
        zealots_correct: usize,
        zealots_incorrect: usize,
    },
    EdgeList(EdgeList),
}

impl NetworkSpec {
    pub fn complete(n_free: usize, zealots_correct: usize, zealots_incorrect: usize) -> Self {
        NetworkSpec::Complete {
            n_free,
            zealots_correct,
            zealots_incorrect,
        }
    }

    pub fn n_free(&self) -> usize {
        match self {
            NetworkSpec::Complete { n_free, .. } => *n_free,
            NetworkSpec::EdgeList(list) => list.n_free(),
        }
    }

    /// `(correct, incorrect)` zealot counts.
    pub fn zealot_counts(&self) -> (usize, usize) {
        match self {
            NetworkSpec::Complete {
                zealots_correct,
                zealots_incorrect,
                ..
            } => (*zealots_correct, *zealots_incorrect),
            NetworkSpec::EdgeList(list) => (list.correct.len(), list.incorrect.len()),
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, NetworkSpec::Complete { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Free voter, with its slot in the state vector.
    Free(usize),
    Correct,
    Incorrect,
}

/// Interaction graph ready for simulation, with its uniform samplers
/// prepared once.
#[derive(Debug, Clone)]
pub struct Graph {
    pub(crate) topology: Topology,
    /// Uniform over free-voter slots.
    pub(crate) pick_free: Uniform<u32>,
    /// Uniform over the `N − 1` other nodes (complete topology only).
    pub(crate) pick_other: Option<Uniform<u32>>,
}

#[derive(Debug, Clone)]
pub(crate) enum Topology {
    /// Implicit complete graph. Node ids run over three blocks: free voters
    /// `0..n`, correct zealots `n..n+α`, incorrect zealots `n+α..N`.
    Complete {
        n_free: usize,
        zealots_correct: usize,
        zealots_incorrect: usize,
    },
    Sparse(SparseGraph),
}

/// Compressed adjacency for an explicit edge list.
#[derive(Debug, Clone)]
pub struct SparseGraph {
    kinds: Vec<NodeKind>,
    free_nodes: Vec<usize>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

impl SparseGraph {
    #[inline]
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn kind(&self, node: usize) -> NodeKind {
        self.kinds[node]
    }

    /// Node id of free-voter slot `slot`.
    pub fn free_node(&self, slot: usize) -> usize {
        self.free_nodes[slot]
    }
}

impl Graph {
    fn new(topology: Topology, n_nodes: usize) -> Result<Self> {
        let n_free = match &topology {
            Topology::Complete { n_free, .. } => *n_free,
            Topology::Sparse(g) => g.free_nodes.len(),
        };
        if n_nodes > u32::MAX as usize {
            return Err(Error::Network(format!("{n_nodes} nodes exceed the supported size")));
        }
        let uniform = |n: usize| Uniform::new(0, n as u32).expect("non-empty range");
        let pick_other = match topology {
            Topology::Complete { .. } => Some(uniform(n_nodes - 1)),
            Topology::Sparse(_) => None,
        };
        Ok(Graph {
            topology,
            pick_free: uniform(n_free),
            pick_other,
        })
    }

    pub fn is_complete(&self) -> bool {
        matches!(self.topology, Topology::Complete { .. })
    }

    pub fn sparse(&self) -> Option<&SparseGraph> {
        match &self.topology {
            Topology::Sparse(g) => Some(g),
            Topology::Complete { .. } => None,
        }
    }

    pub fn n_free(&self) -> usize {
        match &self.topology {
            Topology::Complete { n_free, .. } => *n_free,
            Topology::Sparse(g) => g.free_nodes.len(),
        }
    }

    pub fn node_count(&self) -> usize {
        match &self.topology {
            Topology::Complete {
                n_free,
                zealots_correct,
                zealots_incorrect,
            } => n_free + zealots_correct + zealots_incorrect,
            Topology::Sparse(g) => g.kinds.len(),
        }
    }

    #[inline]
    pub fn kind(&self, node: usize) -> NodeKind {
        match &self.topology {
            &Topology::Complete {
                n_free,
                zealots_correct,
                ..
            } => {
                if node < n_free {
                    NodeKind::Free(node)
                } else if node < n_free + zealots_correct {
                    NodeKind::Correct
                } else {
                    NodeKind::Incorrect
                }
            }
            Topology::Sparse(g) => g.kinds[node],
        }
    }

    pub fn degree(&self, node: usize) -> usize {
        match &self.topology {
            Topology::Complete { .. } => self.node_count() - 1,
            Topology::Sparse(g) => g.neighbors(node).len(),
        }
    }
}

/// Validates a spec and builds its graph. The complete topology is kept
/// implicit, so memory stays linear in the number of free voters.
pub fn build_network(spec: &NetworkSpec) -> Result<Graph> {
    match spec {
        &NetworkSpec::Complete {
            n_free,
            zealots_correct,
            zealots_incorrect,
        } => {
            if n_free == 0 {
                return Err(Error::Network("no free voters".into()));
            }
            if n_free + zealots_correct + zealots_incorrect < 2 {
                return Err(Error::Network("a lone free voter has no neighbours".into()));
            }
            let topology = Topology::Complete {
                n_free,
                zealots_correct,
                zealots_incorrect,
            };
            Graph::new(topology, n_free + zealots_correct + zealots_incorrect)
        }
        NetworkSpec::EdgeList(list) => {
            let sparse = build_sparse(list)?;
            let count = sparse.kinds.len();
            Graph::new(Topology::Sparse(sparse), count)
        }
    }
}

fn build_sparse(list: &EdgeList) -> Result<SparseGraph> {
    let count = list.node_count();
    let mut kinds = vec![None; count];
    for (ids, kind) in [
        (&list.correct, NodeKind::Correct),
        (&list.incorrect, NodeKind::Incorrect),
    ] {
        for &id in ids {
            match kinds[id] {
                None => kinds[id] = Some(kind),
                Some(k) if k == kind => {}
                Some(_) => {
                    return Err(Error::Network(format!(
                        "node {id} is listed as both correct and incorrect zealot"
                    )))
                }
            }
        }
    }
    let mut free_nodes = Vec::new();
    let kinds: Vec<NodeKind> = kinds
        .into_iter()
        .enumerate()
        .map(|(id, k)| {
            k.unwrap_or_else(|| {
                free_nodes.push(id);
                NodeKind::Free(free_nodes.len() - 1)
            })
        })
        .collect();
    if free_nodes.is_empty() {
        return Err(Error::Network("no free voters".into()));
    }

    let mut pairs: Vec<(usize, usize)> = list
        .edges
        .iter()
        .filter(|(u, v)| u != v)
        .flat_map(|&(u, v)| [(u, v), (v, u)])
        .collect();
    pairs.sort_unstable();
    pairs.dedup();

    let mut offsets = vec![0; count + 1];
    for &(u, _) in &pairs {
        offsets[u + 1] += 1;
    }
    for i in 0..count {
        offsets[i + 1] += offsets[i];
    }
    let neighbors = pairs.into_iter().map(|(_, v)| v).collect();
    let graph = SparseGraph {
        kinds,
        free_nodes,
        offsets,
        neighbors,
    };

    if let Some(&isolated) = graph.free_nodes.iter().find(|&&node| graph.neighbors(node).is_empty()) {
        return Err(Error::Network(format!("free voter {isolated} has no neighbours")));
    }
    Ok(graph)
}
