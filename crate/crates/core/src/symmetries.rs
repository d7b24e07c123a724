//! Facet permutations of simple polytopes.
//!
//! The 120-cell group comes from the quaternion actions `x ↦ a·x·b` and
//! `x ↦ a·x*·b` with `a, b` among the facet centers; cubes use signed
//! coordinate permutations; anything else falls back to adjacency-graph
//! automorphisms.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exactnum::Quaternion;
use crate::par::{self, Execution};
use crate::polytopes::{FacetMask, Polytope};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Preserving,
    Reversing,
    Unknown,
}

impl Orientation {
    pub fn compose(self, other: Orientation) -> Orientation {
        use Orientation::*;
        match (self, other) {
            (Unknown, _) | (_, Unknown) => Unknown,
            (a, b) if a == b => Preserving,
            _ => Reversing,
        }
    }
}

/// A bijection of facet labels; `images[i]` is the image of facet `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FacetPermutation {
    images: Vec<u8>,
    orientation: Orientation,
}

impl PartialOrd for FacetPermutation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FacetPermutation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.images
            .cmp(&other.images)
            .then(self.orientation.cmp(&other.orientation))
    }
}

impl FacetPermutation {
    pub fn identity(m: usize) -> Self {
        Self {
            images: (0..m as u8).collect(),
            orientation: Orientation::Preserving,
        }
    }

    pub fn new(images: Vec<usize>, orientation: Orientation) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &x in &images {
            if x >= m || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPolytope(format!(
                    "image list is not a permutation of {m} labels"
                )));
            }
        }
        Ok(Self {
            images: images.into_iter().map(|x| x as u8).collect(),
            orientation,
        })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &FacetPermutation) -> FacetPermutation {
        FacetPermutation {
            images: other.images.iter().map(|&j| self.images[j as usize]).collect(),
            orientation: self.orientation.compose(other.orientation),
        }
    }

    pub fn inverse(&self) -> FacetPermutation {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        FacetPermutation {
            images: inv,
            orientation: self.orientation,
        }
    }

    pub fn map_mask(&self, mask: FacetMask) -> FacetMask {
        let mut out = 0;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            out |= 1u128 << self.images[i];
        }
        out
    }

    pub fn preserves_adjacency(&self, p: &Polytope) -> bool {
        self.len() == p.facet_count()
            && (0..self.len()).all(|i| self.map_mask(p.neighbor_mask(i)) == p.neighbor_mask(self.image(i)))
    }
}

/// A finite group of facet permutations, kept sorted by image array.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    elements: Vec<FacetPermutation>,
    index: HashMap<Vec<u8>, usize>,
}

impl SymmetryGroup {
    pub fn from_elements(mut elements: Vec<FacetPermutation>) -> Self {
        elements.sort();
        elements.dedup_by(|a, b| a.images == b.images);
        let index = elements
            .iter()
            .enumerate()
            .map(|(k, e)| (e.images.clone(), k))
            .collect();
        Self { elements, index }
    }

    pub fn elements(&self) -> &[FacetPermutation] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &FacetPermutation) -> bool {
        self.index.contains_key(&p.images)
    }

    pub fn find(&self, images: &[u8]) -> Option<&FacetPermutation> {
        self.index.get(images).map(|&k| &self.elements[k])
    }

    pub fn count_by_orientation(&self, o: Orientation) -> usize {
        self.elements.iter().filter(|e| e.orientation == o).count()
    }

    /// One permutation per line, 1-based images, sorted.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.elements {
            let row = e.images.iter().map(|&x| (x as usize + 1).to_string()).join(" ");
            let _ = writeln!(s, "{row}");
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut elements = Vec::new();
        for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let images = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().ok().and_then(|x| x.checked_sub(1)))
                .collect::<Option<Vec<usize>>>()
                .ok_or_else(|| Error::Parse {
                    line: n + 1,
                    msg: "bad permutation entry".into(),
                })?;
            elements.push(FacetPermutation::new(images, Orientation::Unknown).map_err(|e| Error::Parse {
                line: n + 1,
                msg: e.to_string(),
            })?);
        }
        Ok(Self::from_elements(elements))
    }
}

/// Multiplication table of the 120 centers, which form a group under
/// quaternion multiplication.
fn center_table(centers: &[Quaternion], exec: Execution) -> Result<(Vec<Vec<u8>>, Vec<u8>)> {
    let lookup: HashMap<&Quaternion, usize> = centers.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let find = |q: &Quaternion| -> Result<u8> {
        lookup
            .get(q)
            .map(|&i| i as u8)
            .ok_or_else(|| Error::Construction(format!("image {q:?} is not a facet center")))
    };
    let rows = par::map_range(exec, centers.len(), |a| {
        centers.iter().map(|b| find(&(&centers[a] * b))).collect::<Result<Vec<u8>>>()
    });
    let table = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let conj = centers.iter().map(|c| find(&c.conj())).collect::<Result<Vec<_>>>()?;
    Ok((table, conj))
}

pub fn symmetry_group_120cell(p: &Polytope) -> Result<SymmetryGroup> {
    symmetry_group_120cell_with(p, Execution::default())
}

pub fn symmetry_group_120cell_with(p: &Polytope, exec: Execution) -> Result<SymmetryGroup> {
    let centers = p.centers().ok_or(Error::NoCenters)?;
    let m = centers.len();
    let (t, conj) = center_table(centers, exec)?;
    let per_a = par::map_range(exec, m, |a| {
        let mut out = Vec::with_capacity(2 * m);
        for b in 0..m {
            let right = |x: usize| t[x][b] as usize;
            let keep: Vec<usize> = (0..m).map(|x| right(t[a][x] as usize)).collect();
            let flip: Vec<usize> = (0..m).map(|x| right(t[a][conj[x] as usize] as usize)).collect();
            out.push((keep, Orientation::Preserving));
            out.push((flip, Orientation::Reversing));
        }
        out
    });
    let mut elements = Vec::with_capacity(2 * m * m);
    for (images, o) in per_a.into_iter().flatten() {
        elements.push(FacetPermutation::new(images, o)?);
    }
    let group = SymmetryGroup::from_elements(elements);
    for e in group.elements() {
        if !e.preserves_adjacency(p) {
            return Err(Error::Construction("a quaternion map breaks adjacency".into()));
        }
    }
    Ok(group)
}

/// All permutations fixing the facet set `v` (which must be a clique).
pub fn vertex_stabilizer(p: &Polytope, g: &SymmetryGroup, v: &[usize]) -> Result<Vec<FacetPermutation>> {
    for (a, &i) in v.iter().enumerate() {
        for &j in &v[a + 1..] {
            if !p.is_adjacent(i, j) {
                return Err(Error::NotAClique(v.iter().map(|x| x + 1).collect()));
            }
        }
    }
    let mask: FacetMask = v.iter().fold(0, |acc, &i| acc | 1 << i);
    Ok(g
        .elements()
        .iter()
        .filter(|e| e.map_mask(mask) == mask)
        .cloned()
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransferSelection {
    /// Lexicographically smallest image array among candidates.
    LexMin,
    LexMax,
    /// The candidate at position `(k·(i+1)) mod count` for target facet `i`.
    Stride(usize),
}

/// For each facet `i`, one group element sending facet 0 to `i`.
pub fn transfer_permutations(g: &SymmetryGroup, m: usize, sel: TransferSelection) -> Result<Vec<FacetPermutation>> {
    let mut by_target: Vec<Vec<&FacetPermutation>> = vec![Vec::new(); m];
    for e in g.elements() {
        by_target[e.image(0)].push(e);
    }
    by_target
        .iter()
        .enumerate()
        .map(|(i, cands)| {
            if cands.is_empty() {
                return Err(Error::Construction(format!("group is not transitive: nothing sends F1 to F{}", i + 1)));
            }
            // elements are sorted, so candidates are too
            let pick = match sel {
                TransferSelection::LexMin => cands[0],
                TransferSelection::LexMax => cands[cands.len() - 1],
                TransferSelection::Stride(k) => cands[(k * (i + 1)) % cands.len()],
            };
            Ok(pick.clone())
        })
        .collect()
}

/// Signed coordinate permutations acting on the facets of `build_cube(n)`.
pub fn cube_symmetries(n: usize) -> SymmetryGroup {
    let mut elements = Vec::new();
    for perm in (0..n).permutations(n) {
        for signs in 0..1usize << n {
            let mut images = vec![0; 2 * n];
            let mut flips = 0;
            for k in 0..n {
                let s = signs >> k & 1;
                flips += s;
                images[k] = perm[k] + n * s;
                images[k + n] = perm[k] + n * (1 - s);
            }
            let inversions = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .filter(|&(a, b)| perm[a] > perm[b])
                .count();
            let o = if (flips + inversions) % 2 == 0 {
                Orientation::Preserving
            } else {
                Orientation::Reversing
            };
            elements.push(FacetPermutation::new(images, o).expect("signed permutation"));
        }
    }
    SymmetryGroup::from_elements(elements)
}

/// Adjacency-preserving bijections `p → q`, up to `limit` of them.
pub fn graph_isomorphisms(p: &Polytope, q: &Polytope, limit: usize) -> Vec<FacetPermutation> {
    let m = p.facet_count();
    if m != q.facet_count() || m == 0 {
        return Vec::new();
    }
    let dp: Vec<usize> = (0..m).map(|i| p.degree(i)).collect();
    let dq: Vec<usize> = (0..m).map(|i| q.degree(i)).collect();
    {
        let (mut a, mut b) = (dp.clone(), dq.clone());
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Vec::new();
        }
    }
    // each facet after the first in its component has an earlier neighbor
    let mut order = Vec::with_capacity(m);
    let mut placed: FacetMask = 0;
    for start in 0..m {
        if placed >> start & 1 == 1 {
            continue;
        }
        placed |= 1 << start;
        order.push(start);
        let mut head = order.len() - 1;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let mut nb = p.neighbor_mask(v) & !placed;
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                placed |= 1 << w;
                order.push(w);
            }
        }
    }
    let by_degree: HashMap<usize, FacetMask> = (0..m).fold(HashMap::new(), |mut acc, j| {
        *acc.entry(dq[j]).or_default() |= 1u128 << j;
        acc
    });
    let mut state = IsoState {
        p,
        q,
        order: &order,
        by_degree: &by_degree,
        degrees: dp,
        map: vec![usize::MAX; m],
        used: 0,
        out: Vec::new(),
        limit,
    };
    state.search(0);
    state.out
}

struct IsoState<'a> {
    p: &'a Polytope,
    q: &'a Polytope,
    order: &'a [usize],
    by_degree: &'a HashMap<usize, FacetMask>,
    degrees: Vec<usize>,
    map: Vec<usize>,
    used: FacetMask,
    out: Vec<FacetPermutation>,
    limit: usize,
}

impl IsoState<'_> {
    fn search(&mut self, depth: usize) {
        if self.out.len() >= self.limit {
            return;
        }
        if depth == self.order.len() {
            self.out.push(
                FacetPermutation::new(self.map.clone(), Orientation::Unknown).expect("bijection"),
            );
            return;
        }
        let v = self.order[depth];
        let mut cand = self.by_degree.get(&self.degrees[v]).copied().unwrap_or(0) & !self.used;
        for &u in &self.order[..depth] {
            let nu = self.q.neighbor_mask(self.map[u]);
            if self.p.is_adjacent(u, v) {
                cand &= nu;
            } else {
                cand &= !nu;
            }
            if cand == 0 {
                return;
            }
        }
        while cand != 0 {
            let w = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            self.map[v] = w;
            self.used |= 1 << w;
            self.search(depth + 1);
            self.used &= !(1u128 << w);
            self.map[v] = usize::MAX;
        }
    }
}

pub fn graph_automorphisms(p: &Polytope) -> SymmetryGroup {
    SymmetryGroup::from_elements(graph_isomorphisms(p, p, usize::MAX))
}

/// The natural symmetry group of a polytope: quaternion actions when centers
/// are present, signed permutations for cubes, graph automorphisms otherwise.
pub fn symmetry_group(p: &Polytope) -> Result<SymmetryGroup> {
    if p.centers().is_some() && p.facet_count() == 120 {
        return symmetry_group_120cell(p);
    }
    if let Some(n) = p.name().strip_prefix("cube-").and_then(|s| s.parse::<usize>().ok()) {
        let g = cube_symmetries(n);
        if g.elements().iter().all(|e| e.preserves_adjacency(p)) {
            return Ok(g);
        }
    }
    Ok(graph_automorphisms(p))
}

pub fn is_closed_under_composition(g: &SymmetryGroup, pairs: impl IntoIterator<Item = (usize, usize)>) -> bool {
    let set: HashSet<&[u8]> = g.elements().iter().map(|e| e.images()).collect();
    pairs.into_iter().all(|(a, b)| {
        let c = g.elements()[a].compose(&g.elements()[b]);
        set.contains(c.images())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytopes::{build_120cell, build_cube, build_dodecahedron, build_lobell};

    #[test]
    fn group_orders() {
        let p = build_120cell().unwrap();
        let g = symmetry_group_120cell(&p).unwrap();
        assert_eq!(g.len(), 14400);
        assert_eq!(g.count_by_orientation(Orientation::Preserving), 7200);
        assert_eq!(g.count_by_orientation(Orientation::Reversing), 7200);
        assert!(g.contains(&FacetPermutation::identity(120)));
        assert_eq!(g.elements()[0], FacetPermutation::identity(120));
    }

    #[test]
    fn stabilizer_is_s4() {
        let p = build_120cell().unwrap();
        let g = symmetry_group_120cell(&p).unwrap();
        let stab = vertex_stabilizer(&p, &g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(stab.len(), 24);
        let actions: HashSet<Vec<usize>> = stab.iter().map(|e| (0..4).map(|i| e.image(i)).collect()).collect();
        assert_eq!(actions.len(), 24);
        assert!(vertex_stabilizer(&p, &g, &[0, 119]).is_err());
    }

    #[test]
    fn cube_group_orders() {
        assert_eq!(cube_symmetries(2).len(), 8);
        assert_eq!(cube_symmetries(3).len(), 48);
        assert_eq!(cube_symmetries(4).len(), 384);
        for n in 2..=4 {
            let c = build_cube(n).unwrap();
            let g = cube_symmetries(n);
            assert!(g.elements().iter().all(|e| e.preserves_adjacency(&c)));
            assert_eq!(graph_automorphisms(&c).len(), g.len());
            assert_eq!(g.count_by_orientation(Orientation::Preserving), g.len() / 2);
        }
    }

    #[test]
    fn small_automorphism_groups() {
        assert_eq!(graph_automorphisms(&build_dodecahedron().unwrap()).len(), 120);
        assert_eq!(graph_automorphisms(&build_cube(2).unwrap()).len(), 8);
        let l5 = build_lobell(5).unwrap();
        let d = build_dodecahedron().unwrap();
        let iso = graph_isomorphisms(&l5, &d, 1);
        assert_eq!(iso.len(), 1);
        assert!(graph_isomorphisms(&build_lobell(6).unwrap(), &d, 1).is_empty());
    }

    #[test]
    fn transfer_identity_first() {
        let p = build_120cell().unwrap();
        let g = symmetry_group_120cell(&p).unwrap();
        let t = transfer_permutations(&g, 120, TransferSelection::LexMin).unwrap();
        assert_eq!(t[0], FacetPermutation::identity(120));
        let b1 = p.block(0).members;
        for (i, e) in t.iter().enumerate() {
            assert_eq!(e.image(0), i);
            let mut img: Vec<usize> = b1.iter().map(|&x| e.image(x)).collect();
            img.sort_unstable();
            assert_eq!(img, p.block(i).members);
        }
    }

    #[test]
    fn export_round_trip() {
        let g = cube_symmetries(3);
        let back = SymmetryGroup::parse_text(&g.to_text()).unwrap();
        let a: Vec<&[u8]> = g.elements().iter().map(|e| e.images()).collect();
        let b: Vec<&[u8]> = back.elements().iter().map(|e| e.images()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn inverse_and_compose() {
        let g = cube_symmetries(3);
        for e in g.elements() {
            assert_eq!(e.compose(&e.inverse()).images(), FacetPermutation::identity(6).images());
        }
        assert!(is_closed_under_composition(&g, (0..48).flat_map(|a| (0..48).map(move |b| (a, b)))));
    }
}
