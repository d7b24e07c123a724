use crate::coloring::{Color, ColoringVector};
use crate::error::Result;
use crate::par;
use crate::polytopes::{low_mask, Polytope};

use super::SearchTask;

/// Frontier size at which subtrees are handed to workers.
const FRONTIER_TARGET: usize = 256;

/// A clique `S` of at most `n − 1` facets whose largest label is the facet
/// being colored; once `S` is colored, every later common neighbor of `S`
/// loses the span of `S` from its domain.
#[derive(Clone, Debug)]
struct Constraint {
    members: Vec<u8>,
    targets: u128,
}

/// Precomputed propagation lists for one polytope.
#[derive(Clone, Debug)]
pub struct RecursionPlan {
    m: usize,
    ending: Vec<Vec<Constraint>>,
}

impl RecursionPlan {
    pub fn new(p: &Polytope) -> Self {
        let m = p.facet_count();
        let mut ending = vec![Vec::new(); m];
        for k in 1..p.dimension() {
            for s in p.cliques(k) {
                let last = *s.last().unwrap();
                let common = s.iter().fold(u128::MAX, |acc, &f| acc & p.neighbor_mask(f));
                let targets = common & !low_mask(last + 1);
                if targets != 0 {
                    ending[last].push(Constraint {
                        members: s.iter().map(|&f| f as u8).collect(),
                        targets,
                    });
                }
            }
        }
        Self { m, ending }
    }

    /// Colors facet `i` with `c` and prunes later domains; `false` on a wipe-out.
    fn propagate(&self, colors: &[Color], dom: &mut [u64], i: usize) -> bool {
        for cons in &self.ending[i] {
            let mut elems = [0u8; 64];
            let mut len = 1;
            for &f in &cons.members {
                let c = colors[f as usize];
                for k in 0..len {
                    elems[len + k] = elems[k] ^ c;
                }
                len *= 2;
            }
            let span = elems[..len].iter().fold(0u64, |acc, &e| acc | 1 << e);
            let mut t = cons.targets;
            while t != 0 {
                let j = t.trailing_zeros() as usize;
                t &= t - 1;
                dom[j] &= !span;
                if dom[j] == 0 {
                    return false;
                }
            }
        }
        true
    }

    fn dfs(&self, depth: usize, colors: &mut Vec<Color>, dom: &[u64], out: &mut Vec<ColoringVector>) {
        if depth == self.m {
            out.push(ColoringVector::from_raw(colors.clone()));
            return;
        }
        let mut choices = dom[depth];
        let mut next = dom.to_vec();
        while choices != 0 {
            let c = choices.trailing_zeros() as Color;
            choices &= choices - 1;
            colors[depth] = c;
            next.copy_from_slice(dom);
            next[depth] = 1 << c;
            if self.propagate(colors, &mut next, depth) {
                self.dfs(depth + 1, colors, &next, out);
            }
        }
        colors[depth] = 0;
    }

    fn children(&self, node: &Node) -> Vec<Node> {
        let mut out = Vec::new();
        let mut choices = node.dom[node.depth];
        while choices != 0 {
            let c = choices.trailing_zeros() as Color;
            choices &= choices - 1;
            let mut colors = node.colors.clone();
            colors[node.depth] = c;
            let mut dom = node.dom.clone();
            dom[node.depth] = 1 << c;
            if self.propagate(&colors, &mut dom, node.depth) {
                out.push(Node { depth: node.depth + 1, colors, dom });
            }
        }
        out
    }
}

#[derive(Clone)]
struct Node {
    depth: usize,
    colors: Vec<Color>,
    dom: Vec<u64>,
}

/// Initial domains: forced colors are singletons, the rest is the palette.
fn initial_node(task: &SearchTask<'_>) -> Result<Node> {
    let forced = task.forced_colors()?;
    let palette = task.palette_mask();
    let dom = forced.iter().map(|&c| if c != 0 { 1u64 << c } else { palette }).collect();
    Ok(Node {
        depth: 0,
        colors: vec![0; forced.len()],
        dom,
    })
}

pub fn color_recursion(task: &SearchTask<'_>) -> Result<Vec<ColoringVector>> {
    let plan = RecursionPlan::new(task.polytope);
    run_plan(&plan, task)
}

pub(crate) fn run_plan(plan: &RecursionPlan, task: &SearchTask<'_>) -> Result<Vec<ColoringVector>> {
    let root = initial_node(task)?;
    if root.dom.contains(&0) {
        return Ok(Vec::new());
    }
    // breadth-first expansion keeps the frontier in lexicographic order
    let mut frontier = vec![root];
    while frontier.len() < FRONTIER_TARGET && frontier.first().is_some_and(|n| n.depth < plan.m) {
        frontier = frontier.iter().flat_map(|n| plan.children(n)).collect();
    }
    let parts = par::map(task.execution, &frontier, |node| {
        let mut out = Vec::new();
        let mut colors = node.colors.clone();
        plan.dfs(node.depth, &mut colors, &node.dom, &mut out);
        out.retain(|v| task.accepts(v.colors()));
        out
    });
    Ok(parts.into_iter().flatten().collect())
}

/// Completions of the first `keep` colors of `v` over the task's palette.
pub fn prefix_search(task: &SearchTask<'_>, v: &ColoringVector, keep: usize) -> Result<Vec<ColoringVector>> {
    let mut t = task.clone();
    t.fixed = (0..keep).map(|f| (f, v.color(f))).collect();
    color_recursion(&t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{is_nonsingular, palette_with, published_vector};
    use crate::par::Execution;
    use crate::polytopes::{build_120cell, build_cube, build_dodecahedron, build_lobell};

    fn all_colors(n: usize) -> Vec<Color> {
        (1..1u8 << n).collect()
    }

    #[test]
    fn square_counts() {
        let sq = build_cube(2).unwrap();
        let t = SearchTask::new(&sq, &all_colors(2));
        assert_eq!(color_recursion(&t).unwrap().len(), 3);
        assert_eq!(color_recursion(&t.clone().unnormalized()).unwrap().len(), 18);
    }

    #[test]
    fn cube_counts() {
        for (n, want) in [(2, 3), (3, 25), (4, 543)] {
            let c = build_cube(n).unwrap();
            let out = color_recursion(&SearchTask::new(&c, &all_colors(n))).unwrap();
            assert_eq!(out.len(), want, "cube {n}");
            assert!(out.windows(2).all(|w| w[0] < w[1]));
            assert!(out.iter().all(|v| is_nonsingular(&c, v)));
        }
    }

    #[test]
    fn sequential_matches_parallel() {
        let c = build_cube(4).unwrap();
        let t = SearchTask::new(&c, &all_colors(4));
        let a = color_recursion(&t.clone().with_execution(Execution::Sequential)).unwrap();
        let b = color_recursion(&t.with_execution(Execution::Parallel)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn five_colorings_of_120cell() {
        let p = build_120cell().unwrap();
        let t = SearchTask::new(&p, &palette_with(4, &[15]));
        let out = color_recursion(&t).unwrap();
        assert_eq!(out.len(), 10);
        assert!(out.iter().all(|v| is_nonsingular(&p, v)));
    }

    #[test]
    fn four_colorings_are_empty() {
        let p = build_120cell().unwrap();
        assert!(color_recursion(&SearchTask::new(&p, &[1, 2, 4, 8])).unwrap().is_empty());
    }

    #[test]
    fn tail_prefix() {
        let p = build_120cell().unwrap();
        let v = published_vector(59);
        let t = SearchTask::new(&p, &all_colors(4));
        assert_eq!(prefix_search(&t, &v, 119).unwrap(), vec![v.clone()]);
        let out = prefix_search(&t, &v, 113).unwrap();
        assert!(out.iter().all(|w| w == &v));
    }

    #[test]
    fn dodecahedron_and_lobell() {
        let d = build_dodecahedron().unwrap();
        let l5 = build_lobell(5).unwrap();
        let a = color_recursion(&SearchTask::new(&d, &all_colors(3))).unwrap();
        let b = color_recursion(&SearchTask::new(&l5, &all_colors(3))).unwrap();
        assert_eq!(a.len(), 2165);
        assert_eq!(b.len(), 2165);
    }

    #[test]
    fn rejects_bad_tasks() {
        let c = build_cube(3).unwrap();
        assert!(color_recursion(&SearchTask::new(&c, &[1, 2, 3])).is_err());
        assert!(color_recursion(&SearchTask::new(&c, &[1, 2, 4, 9])).is_err());
        let t = SearchTask::new(&c, &all_colors(3)).with_fixed(vec![(0, 2)]);
        assert!(color_recursion(&t).is_err());
    }
}
