//! Linear extensions through random ternary search trees, and heights from a
//! linear extension.

use crate::error::{Error, Result};
use crate::generate::rng_from_seed;
use crate::oracle::Oracle;
use crate::poset::{ElementId, Poset, Verdict};
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    elem: ElementId,
    /// Subtrees for elements below, incomparable to, and above `elem`.
    children: [Option<usize>; 3],
}

/// A ternary search tree. Every node splits the rest of its subtree by relation
/// to the node's element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryTree {
    nodes: Vec<Node>,
    root: Option<usize>,
    weight: u64,
}

/// Builds a tree with a uniformly random root at every node. Asks exactly
/// [`TernaryTree::weight`] queries.
pub fn build_ternary_tree<O: Oracle + ?Sized>(oracle: &mut O, seed: u64) -> Result<TernaryTree> {
    let mut rng = rng_from_seed(seed);
    let mut nodes: Vec<Node> = Vec::new();
    let mut weight = 0u64;
    // elements of a subtree, with the parent node and branch to attach it to
    type Pending = (Vec<ElementId>, Option<(usize, usize)>);
    let mut work: Vec<Pending> = vec![((0..oracle.len()).collect(), None)];
    let mut root = None;
    while let Some((mut elems, parent)) = work.pop() {
        if elems.is_empty() {
            continue;
        }
        let pivot = elems.swap_remove(rng.gen_range(0..elems.len()));
        let id = nodes.len();
        nodes.push(Node { elem: pivot, children: [None; 3] });
        match parent {
            Some((p, branch)) => nodes[p].children[branch] = Some(id),
            None => root = Some(id),
        }
        weight += elems.len() as u64;
        let mut parts: [Vec<ElementId>; 3] = Default::default();
        for y in elems {
            let branch = match oracle.query(pivot, y)? {
                Verdict::Dominates => 0,
                Verdict::Incomparable => 1,
                Verdict::DominatedBy => 2,
            };
            parts[branch].push(y);
        }
        for (branch, part) in parts.into_iter().enumerate() {
            work.push((part, Some((id, branch))));
        }
    }
    Ok(TernaryTree { nodes, root, weight })
}

impl TernaryTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Sum over nodes of the number of elements strictly inside the node's subtree.
    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn root(&self) -> Option<ElementId> {
        self.root.map(|r| self.nodes[r].elem)
    }

    /// Below-subtree, then the element, then the incomparable and above
    /// subtrees, recursively.
    pub fn linear_extension(&self) -> Vec<ElementId> {
        enum Step {
            Visit(usize),
            Emit(ElementId),
        }
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack: Vec<Step> = self.root.map(Step::Visit).into_iter().collect();
        while let Some(step) = stack.pop() {
            match step {
                Step::Emit(x) => out.push(x),
                Step::Visit(i) => {
                    let [below, middle, above] = self.nodes[i].children;
                    stack.extend(above.map(Step::Visit));
                    stack.extend(middle.map(Step::Visit));
                    stack.push(Step::Emit(self.nodes[i].elem));
                    stack.extend(below.map(Step::Visit));
                }
            }
        }
        out
    }

    /// Checks every node's split against `p`.
    pub fn partitions_correctly(&self, p: &Poset) -> bool {
        (0..self.nodes.len()).all(|i| {
            let x = self.nodes[i].elem;
            let want = [Verdict::Dominates, Verdict::Incomparable, Verdict::DominatedBy];
            self.nodes[i]
                .children
                .iter()
                .zip(want)
                .all(|(child, v)| child.is_none_or(|c| self.subtree(c).iter().all(|&y| p.relation(x, y) == v)))
        })
    }

    fn subtree(&self, i: usize) -> Vec<ElementId> {
        let mut out = Vec::new();
        let mut stack = vec![i];
        while let Some(j) = stack.pop() {
            out.push(self.nodes[j].elem);
            stack.extend(self.nodes[j].children.iter().flatten());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Heights {
    /// Height of each element, by id.
    pub heights: Vec<usize>,
    /// Largest number of processed elements sharing one height.
    pub max_frontier: usize,
}

/// Heights from a linear extension listed bottom first.
///
/// Each element binary-searches the levels seen so far: it lies above level
/// `h` exactly when it dominates some processed element of height `h`. A level
/// test asks at most `w` queries and stops at the first dominated element.
pub fn heights_from_extension<O: Oracle + ?Sized>(ext: &[ElementId], oracle: &mut O, w: usize) -> Result<Heights> {
    let n = oracle.len();
    let mut seen = vec![false; n];
    for &x in ext {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::Domain(format!("extension repeats or misses element {x}")));
        }
    }
    if ext.len() != n {
        return Err(Error::Domain("extension does not list every element".into()));
    }

    let mut levels: Vec<Vec<ElementId>> = Vec::new();
    let mut heights = vec![0usize; n];
    let mut max_frontier = 0;
    for &x in ext {
        let (mut lo, mut hi) = (0, levels.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            let mut above = false;
            for &s in &levels[mid] {
                match oracle.query(x, s)? {
                    Verdict::Dominates => {
                        above = true;
                        break;
                    }
                    Verdict::DominatedBy => return Err(Error::InvalidExtension { earlier: s, later: x }),
                    Verdict::Incomparable => {}
                }
            }
            if above {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo == levels.len() {
            levels.push(Vec::new());
        }
        levels[lo].push(x);
        if levels[lo].len() > w {
            return Err(Error::WidthExceeded(w));
        }
        max_frontier = max_frontier.max(levels[lo].len());
        heights[x] = lo;
    }
    Ok(Heights { heights, max_frontier })
}
