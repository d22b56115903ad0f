//! Spanning-tree sweeps over the dual graph: exhaustive
//! contraction/deletion enumeration and uniform random sampling, driving the
//! hunt for nonoverlapping nets.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::float::Tolerance;

use super::{check_overlap, unfold, CutTree, Net, Polytope3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeStrategy {
    Exhaustive,
    Random,
}

impl std::str::FromStr for TreeStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(TreeStrategy::Exhaustive),
            "random" => Ok(TreeStrategy::Random),
            other => Err(Error::invalid(format!(
                "unknown strategy {other:?}; use exhaustive or random"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Found,
    NotFound,
}

/// Tally of a spanning-tree sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub examined: usize,
    pub overlapping: usize,
    pub nonoverlapping: usize,
    /// First nonoverlapping net in sweep order, if any.
    #[serde(skip)]
    pub found: Option<Net>,
    /// Fold-edge trees of one overlapping and one nonoverlapping example.
    pub example_overlapping: Option<CutTree>,
    pub example_nonoverlapping: Option<CutTree>,
}

/// Enumerate spanning trees of the dual graph in a canonical order by
/// contraction/deletion over the arc list, visiting at most `budget` trees.
pub fn enumerate_spanning_trees(p: &Polytope3, budget: usize) -> Result<Vec<CutTree>> {
    if budget == 0 {
        return Err(Error::invalid("tree budget must be at least 1"));
    }
    let arcs = p.dual_arcs();
    let f = p.face_count();
    let mut out: Vec<CutTree> = Vec::new();

    // Recursive contraction/deletion on the component labeling. Arcs are
    // considered in index order: including an arc merges its endpoints,
    // excluding it is allowed only while the rest can still connect them.
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        arcs: &[(usize, usize)],
        edges: &[(usize, usize)],
        idx: usize,
        comp: &mut Vec<usize>,
        comps_left: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<CutTree>,
        budget: usize,
    ) {
        if out.len() >= budget {
            return;
        }
        if comps_left == 1 {
            out.push(CutTree::new(chosen.iter().map(|&i| edges[i])));
            return;
        }
        if idx >= arcs.len() {
            return;
        }
        let (a, b) = arcs[idx];
        let (ca, cb) = (comp[a], comp[b]);
        if ca == cb {
            recurse(arcs, edges, idx + 1, comp, comps_left, chosen, out, budget);
            return;
        }
        // Include: contract the arc.
        let saved = comp.clone();
        for c in comp.iter_mut() {
            if *c == cb {
                *c = ca;
            }
        }
        chosen.push(idx);
        recurse(
            arcs,
            edges,
            idx + 1,
            comp,
            comps_left - 1,
            chosen,
            out,
            budget,
        );
        chosen.pop();
        *comp = saved;

        // Exclude: only if the remaining arcs still connect everything.
        if still_connectable(arcs, idx + 1, comp, comps_left) {
            recurse(arcs, edges, idx + 1, comp, comps_left, chosen, out, budget);
        }
    }

    fn still_connectable(
        arcs: &[(usize, usize)],
        from: usize,
        comp: &[usize],
        comps_left: usize,
    ) -> bool {
        // Union-find over the remaining arcs.
        let mut parent: Vec<usize> = (0..comp.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut merges = 0usize;
        for &(a, b) in &arcs[from..] {
            let (ra, rb) = (find(&mut parent, comp[a]), find(&mut parent, comp[b]));
            if ra != rb {
                parent[ra] = rb;
                merges += 1;
                if merges == comps_left - 1 {
                    return true;
                }
            }
        }
        comps_left == 1
    }

    let arc_faces: Vec<(usize, usize)> = arcs.iter().map(|a| a.faces).collect();
    let arc_edges: Vec<(usize, usize)> = arcs.iter().map(|a| a.edge).collect();
    recurse(
        &arc_faces,
        &arc_edges,
        0,
        &mut (0..f).collect(),
        f,
        &mut Vec::new(),
        &mut out,
        budget,
    );
    Ok(out)
}

/// One uniform spanning tree of the dual graph, by loop-erased random walks.
pub fn sample_spanning_tree(p: &Polytope3, rng: &mut ChaCha8Rng) -> CutTree {
    let arcs = p.dual_arcs();
    let f = p.face_count();
    let mut nbrs: Vec<Vec<(usize, (usize, usize))>> = vec![Vec::new(); f];
    for a in &arcs {
        nbrs[a.faces.0].push((a.faces.1, a.edge));
        nbrs[a.faces.1].push((a.faces.0, a.edge));
    }

    let mut in_tree = vec![false; f];
    in_tree[0] = true;
    let mut next: Vec<Option<(usize, (usize, usize))>> = vec![None; f];
    let mut edges = Vec::with_capacity(f - 1);
    for start in 1..f {
        if in_tree[start] {
            continue;
        }
        // Random walk until the tree is hit, remembering the last exit.
        let mut v = start;
        while !in_tree[v] {
            let pick = nbrs[v][rng.gen_range(0..nbrs[v].len())];
            next[v] = Some(pick);
            v = pick.0;
        }
        // Retrace the loop-erased path into the tree.
        let mut v = start;
        while !in_tree[v] {
            in_tree[v] = true;
            let (w, edge) = next[v].expect("walk recorded an exit");
            edges.push(edge);
            v = w;
        }
    }
    CutTree::new(edges)
}

/// Sweep spanning trees (exhaustively in canonical order, or uniformly at
/// random) and classify each resulting net. `found` is the first
/// nonoverlapping net in sweep order; counts cover every examined tree.
pub fn search_nonoverlapping(
    p: &Polytope3,
    strategy: TreeStrategy,
    budget: usize,
    seed: u64,
    tol: Tolerance,
) -> Result<SearchOutcome> {
    if budget == 0 {
        return Err(Error::invalid("search budget must be at least 1"));
    }
    let trees: Vec<CutTree> = match strategy {
        TreeStrategy::Exhaustive => enumerate_spanning_trees(p, budget)?,
        TreeStrategy::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..budget)
                .map(|_| sample_spanning_tree(p, &mut rng))
                .collect()
        }
    };

    let verdicts: Vec<(CutTree, Net, bool)> = trees
        .into_par_iter()
        .map(|tree| {
            let net = unfold(p, &tree)?;
            let report = check_overlap(&net, tol)?;
            Ok((tree, net, report.overlapping))
        })
        .collect::<Result<_>>()?;

    let mut outcome = SearchOutcome {
        status: SearchStatus::NotFound,
        examined: verdicts.len(),
        overlapping: 0,
        nonoverlapping: 0,
        found: None,
        example_overlapping: None,
        example_nonoverlapping: None,
    };
    for (tree, net, overlapping) in verdicts {
        if overlapping {
            outcome.overlapping += 1;
            outcome.example_overlapping.get_or_insert(tree);
        } else {
            outcome.nonoverlapping += 1;
            if outcome.found.is_none() {
                outcome.example_nonoverlapping = Some(tree);
                outcome.found = Some(net);
                outcome.status = SearchStatus::Found;
            }
        }
    }
    Ok(outcome)
}
