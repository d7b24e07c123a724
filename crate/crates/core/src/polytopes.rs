//! Simple polytopes as facet-adjacency structures.
//!
//! Facets are 0-based internally and 1-based in every text format. The
//! adjacency relation is stored as one `u128` neighbor mask per facet, which
//! caps the facet count at [`MAX_FACETS`].

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactnum::{inner_product, QuadraticRational, Quaternion};

pub type FacetMask = u128;

pub const MAX_FACETS: usize = 128;

const CENTERS_120CELL: &str = include_str!("../data/centers_120cell.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    name: String,
    dimension: usize,
    neighbors: Vec<FacetMask>,
    centers: Option<Vec<Quaternion>>,
    declared_vertices: Option<usize>,
    vertices: Vec<Vec<usize>>,
}

/// A facet together with all facets adjacent to it, sorted increasingly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub index: usize,
    pub members: Vec<usize>,
}

impl Polytope {
    /// Builds a polytope from 0-based adjacent pairs.
    pub fn from_edges(
        name: impl Into<String>,
        dimension: usize,
        facets: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if facets > MAX_FACETS {
            return Err(Error::InvalidPolytope(format!(
                "{facets} facets exceeds the supported maximum of {MAX_FACETS}"
            )));
        }
        if dimension == 0 {
            return Err(Error::InvalidPolytope("dimension must be positive".into()));
        }
        let mut neighbors = vec![0u128; facets];
        for (i, j) in edges {
            if i >= facets || j >= facets {
                return Err(Error::InvalidPolytope(format!(
                    "facet label out of range in pair ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                return Err(Error::InvalidPolytope(format!(
                    "facet {} is adjacent to itself",
                    i + 1
                )));
            }
            neighbors[i] |= 1 << j;
            neighbors[j] |= 1 << i;
        }
        let mut p = Self {
            name: name.into(),
            dimension,
            neighbors,
            centers: None,
            declared_vertices: None,
            vertices: Vec::new(),
        };
        p.vertices = p.cliques(dimension);
        Ok(p)
    }

    /// Builds a polytope from a full boolean adjacency matrix, rejecting
    /// asymmetric or reflexive input.
    pub fn from_adjacency_matrix(
        name: impl Into<String>,
        dimension: usize,
        matrix: &[Vec<bool>],
    ) -> Result<Self> {
        let m = matrix.len();
        let mut edges = Vec::new();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidPolytope("adjacency matrix is not square".into()));
            }
            if row[i] {
                return Err(Error::InvalidPolytope(format!(
                    "nonzero diagonal entry at facet {}",
                    i + 1
                )));
            }
            for (j, &a) in row.iter().enumerate() {
                if a != matrix[j][i] {
                    return Err(Error::InvalidPolytope(format!(
                        "asymmetric adjacency between facets {} and {}",
                        i + 1,
                        j + 1
                    )));
                }
                if a && i < j {
                    edges.push((i, j));
                }
            }
        }
        Self::from_edges(name, dimension, m, edges)
    }

    pub fn with_declared_vertices(mut self, count: usize) -> Self {
        self.declared_vertices = Some(count);
        self
    }

    pub fn with_centers(mut self, centers: Vec<Quaternion>) -> Result<Self> {
        if centers.len() != self.facet_count() {
            return Err(Error::InvalidPolytope(format!(
                "{} centers for {} facets",
                centers.len(),
                self.facet_count()
            )));
        }
        self.centers = Some(centers);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn facet_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn declared_vertices(&self) -> Option<usize> {
        self.declared_vertices
    }

    pub fn centers(&self) -> Option<&[Quaternion]> {
        self.centers.as_deref()
    }

    pub fn neighbor_mask(&self, i: usize) -> FacetMask {
        self.neighbors[i]
    }

    pub fn neighbor_masks(&self) -> &[FacetMask] {
        &self.neighbors
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.neighbors[i] >> j & 1 == 1
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        mask_to_vec(self.neighbors[i])
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].count_ones() as usize
    }

    /// Sorted adjacent pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.facet_count() {
            for j in mask_to_vec(self.neighbors[i] & !low_mask(i + 1)) {
                out.push((i, j));
            }
        }
        out
    }

    /// The `n`-cliques of the adjacency graph, i.e. the vertices for a flag polytope.
    pub fn vertices(&self) -> &[Vec<usize>] {
        &self.vertices
    }

    /// All `k`-cliques, each sorted, in lexicographic order.
    pub fn cliques(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if k == 0 {
            return vec![Vec::new()];
        }
        let all = low_mask(self.facet_count());
        let mut stack = Vec::with_capacity(k);
        collect_cliques(&self.neighbors, all, k, &mut stack, &mut out);
        out
    }

    pub fn block(&self, i: usize) -> Block {
        Block {
            index: i,
            members: mask_to_vec(self.neighbors[i] | 1 << i),
        }
    }

    /// The subgraph induced on `members` (in the given order), same dimension.
    pub fn induced(&self, members: &[usize]) -> Result<Polytope> {
        let mut edges = Vec::new();
        for (a, &i) in members.iter().enumerate() {
            for (b, &j) in members.iter().enumerate().skip(a + 1) {
                if self.is_adjacent(i, j) {
                    edges.push((a, b));
                }
            }
        }
        Polytope::from_edges(
            format!("{}[induced]", self.name),
            self.dimension,
            members.len(),
            edges,
        )
    }

    /// Partition of the facets by exact cosine to the center of `base`, in
    /// order of decreasing cosine (nine classes for the 120-cell).
    pub fn layers(&self, base: usize) -> Result<Vec<Vec<usize>>> {
        let centers = self.centers.as_ref().ok_or(Error::NoCenters)?;
        let expected = layer_cosines();
        let mut classes = vec![Vec::new(); expected.len()];
        for (j, c) in centers.iter().enumerate() {
            let ip = inner_product(&centers[base], c);
            let pos = expected
                .iter()
                .position(|e| *e == ip)
                .ok_or_else(|| Error::UnexpectedLayer(ip.to_string()))?;
            classes[pos].push(j);
        }
        Ok(classes)
    }

    /// Checks that the clique complex behaves like the boundary of a simple
    /// polytope's dual: every `(n−1)`-clique lies in exactly two `n`-cliques,
    /// and the `n`-clique count matches the declared vertex count if any.
    pub fn is_flag_consistent(&self) -> bool {
        let n = self.dimension;
        if let Some(v) = self.declared_vertices {
            if v != self.vertices.len() {
                return false;
            }
        }
        if self.vertices.is_empty() {
            return false;
        }
        let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
        for v in &self.vertices {
            for skip in 0..n {
                let ridge: Vec<usize> = v
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| t != skip)
                    .map(|(_, &f)| f)
                    .collect();
                *ridge_count.entry(ridge).or_default() += 1;
            }
        }
        let ridges = self.cliques(n - 1);
        ridges.len() == ridge_count.len()
            && ridges.iter().all(|r| ridge_count.get(r) == Some(&2))
    }

    /// f-vector of the dual simplicial sphere: counts of `k`-cliques, `k = 1..=n`.
    pub fn f_vector(&self) -> Vec<usize> {
        (1..=self.dimension).map(|k| self.cliques(k).len()).collect()
    }

    pub fn to_interchange_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "polytope {}", self.name);
        let _ = writeln!(s, "dimension {}", self.dimension);
        let _ = writeln!(s, "facets {}", self.facet_count());
        if let Some(v) = self.declared_vertices {
            let _ = writeln!(s, "vertices {v}");
        }
        let edges = self.edges();
        let _ = writeln!(s, "adjacency {}", edges.len());
        for (i, j) in edges {
            let _ = writeln!(s, "{} {}", i + 1, j + 1);
        }
        if let Some(centers) = &self.centers {
            let _ = writeln!(s, "centers");
            for (i, c) in centers.iter().enumerate() {
                let _ = write!(s, "{}", i + 1);
                for x in c.coords() {
                    let _ = write!(s, " {} {}", x.rational_part(), x.sqrt5_part());
                }
                s.push('\n');
            }
        }
        s.push_str("end\n");
        s
    }

    pub fn parse_interchange(text: &str) -> Result<Polytope> {
        Parser::new(text).parse()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_interchange_string())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Polytope> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_interchange(&text)
    }
}

fn collect_cliques(
    neighbors: &[FacetMask],
    candidates: FacetMask,
    k: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if stack.len() == k {
        out.push(stack.clone());
        return;
    }
    let mut c = candidates;
    while c != 0 {
        let v = c.trailing_zeros() as usize;
        c &= c - 1;
        stack.push(v);
        // only larger labels keep each clique sorted and unique
        collect_cliques(neighbors, candidates & neighbors[v] & !low_mask(v + 1), k, stack, out);
        stack.pop();
    }
}

pub fn low_mask(n: usize) -> FacetMask {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

pub fn mask_to_vec(mut m: FacetMask) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// The nine cosines 1, φ/2, 1/2, φ⁻¹/2, 0, −φ⁻¹/2, −1/2, −φ/2, −1.
pub fn layer_cosines() -> Vec<QuadraticRational> {
    let phi = QuadraticRational::phi().halve();
    let half = QuadraticRational::from_ratios(1, 2, 0, 1);
    let pinv = QuadraticRational::phi_inv().halve();
    let pos = [QuadraticRational::one(), phi, half, pinv];
    let mut out: Vec<QuadraticRational> = pos.to_vec();
    out.push(QuadraticRational::zero());
    out.extend(pos.iter().rev().map(|x| -x));
    out
}

fn parse_center_token(tok: &str) -> Result<QuadraticRational> {
    let (neg, t) = match tok.strip_prefix('-') {
        Some(t) => (true, t),
        None => (false, tok),
    };
    let v = match t {
        "0" => QuadraticRational::zero(),
        "1" => QuadraticRational::one(),
        "p" => QuadraticRational::phi(),
        "q" => QuadraticRational::phi_inv(),
        _ => {
            return Err(Error::Construction(format!("bad center token {tok:?}")));
        }
    };
    Ok(if neg { -v } else { v })
}

/// Facet centers in the fixed facet order, from the bundled coordinate table.
pub fn centers_120cell() -> Result<Vec<Quaternion>> {
    let mut out = Vec::with_capacity(120);
    for line in CENTERS_120CELL.lines().filter(|l| !l.trim().is_empty()) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 5 {
            return Err(Error::Construction(format!("bad center line {line:?}")));
        }
        let coords = [
            parse_center_token(toks[1])?,
            parse_center_token(toks[2])?,
            parse_center_token(toks[3])?,
            parse_center_token(toks[4])?,
        ];
        let q = Quaternion::from_coords(coords);
        out.push(match toks[0] {
            "h" => q.halve(),
            "w" => q,
            other => return Err(Error::Construction(format!("bad scale {other:?}"))),
        });
    }
    Ok(out)
}

fn even_permutations_of_4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().any(|&x| std::mem::replace(&mut seen[x], true)) {
                        continue;
                    }
                    let inversions = (0..4)
                        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                        .filter(|&(i, j)| p[i] > p[j])
                        .count();
                    if inversions % 2 == 0 {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// The 120 unit quaternions of the binary icosahedral group, generated from
/// the 24 Hurwitz units and the even permutations of ½(0, ±1, ±φ⁻¹, ±φ).
pub fn binary_icosahedral_group() -> Vec<Quaternion> {
    let mut out = Vec::with_capacity(120);
    for axis in 0..4 {
        for sign in [1i64, -1] {
            let mut c = [0i64; 4];
            c[axis] = sign;
            out.push(Quaternion::from_ints(c[0], c[1], c[2], c[3]));
        }
    }
    for bits in 0..16u32 {
        let s = |k: u32| if bits >> k & 1 == 1 { -1 } else { 1 };
        out.push(Quaternion::from_ints(s(0), s(1), s(2), s(3)).halve());
    }
    let base = [
        QuadraticRational::zero(),
        QuadraticRational::one(),
        QuadraticRational::phi_inv(),
        QuadraticRational::phi(),
    ];
    for perm in even_permutations_of_4() {
        for signs in 0..8u32 {
            let mut coords: [QuadraticRational; 4] = Default::default();
            for (src, &dst) in perm.iter().enumerate() {
                let mut v = base[src].clone();
                if src > 0 && signs >> (src - 1) & 1 == 1 {
                    v = -v;
                }
                coords[dst] = v;
            }
            out.push(Quaternion::from_coords(coords).halve());
        }
    }
    out
}

/// The right-angled 120-cell with facet centers in the standard order.
pub fn build_120cell() -> Result<Polytope> {
    let centers = centers_120cell()?;
    if centers.len() != 120 {
        return Err(Error::Construction(format!("{} centers", centers.len())));
    }
    let generated: std::collections::HashSet<Quaternion> =
        binary_icosahedral_group().into_iter().collect();
    if generated.len() != 120 {
        return Err(Error::Construction("generated center set is not of size 120".into()));
    }
    for (i, c) in centers.iter().enumerate() {
        if !generated.contains(c) {
            return Err(Error::Construction(format!(
                "tabulated center of facet {} is not in the generated set",
                i + 1
            )));
        }
    }
    let adjacent_cos = QuadraticRational::phi().halve();
    let mut edges = Vec::new();
    for i in 0..120 {
        for j in i + 1..120 {
            if inner_product(&centers[i], &centers[j]) == adjacent_cos {
                edges.push((i, j));
            }
        }
    }
    let p = Polytope::from_edges("120-cell", 4, 120, edges)?
        .with_declared_vertices(600)
        .with_centers(centers)?;
    for i in 0..120 {
        if p.degree(i) != 12 {
            return Err(Error::Construction(format!(
                "facet {} has {} neighbors",
                i + 1,
                p.degree(i)
            )));
        }
    }
    Ok(p)
}

/// The `n`-cube: facets `x_1+, …, x_n+, x_1−, …, x_n−`; facet `i` misses
/// only its opposite `i ± n`.
pub fn build_cube(n: usize) -> Result<Polytope> {
    if !(1..=6).contains(&n) {
        return Err(Error::InvalidPolytope(format!("cube dimension {n} outside 1..=6")));
    }
    let m = 2 * n;
    let edges = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .filter(|&(i, j)| j != i + n);
    Ok(Polytope::from_edges(format!("cube-{n}"), n, m, edges)?.with_declared_vertices(1 << n))
}

/// The Löbell polytope `L_n` with facets ordered
/// `T, U_0..U_{n−1}, L_0..L_{n−1}, B` so that `T, U_0, U_1` share a vertex.
pub fn build_lobell(n: usize) -> Result<Polytope> {
    if n < 5 {
        return Err(Error::InvalidPolytope(format!("Löbell polytope needs n >= 5, got {n}")));
    }
    let top = 0;
    let up = |i: usize| 1 + i % n;
    let low = |i: usize| 1 + n + i % n;
    let bottom = 2 * n + 1;
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((top, up(i)));
        edges.push((bottom, low(i)));
        edges.push((up(i), up(i + 1)));
        edges.push((low(i), low(i + 1)));
        edges.push((up(i), low(i)));
        edges.push((up(i), low(i + 1)));
    }
    let edges = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b)));
    Ok(
        Polytope::from_edges(format!("lobell-{n}"), 3, 2 * n + 2, edges)?
            .with_declared_vertices(4 * n),
    )
}

/// The dodecahedron labeled so that `b_1 = {F1..F6}` and `b_2 = {F1,F2,F3,F4,F7,F8}`.
pub fn build_dodecahedron() -> Result<Polytope> {
    let l5 = build_lobell(5)?;
    // Löbell index -> dodecahedron label; upper ring runs F2, F4, F5, F6, F3.
    let relabel = [0usize, 1, 3, 4, 5, 2, 6, 7, 8, 9, 10, 11];
    let edges = l5
        .edges()
        .into_iter()
        .map(|(a, b)| (relabel[a].min(relabel[b]), relabel[a].max(relabel[b])));
    Ok(Polytope::from_edges("dodecahedron", 3, 12, edges)?.with_declared_vertices(20))
}

/// Resolves a built-in name: `120cell`, `dodecahedron`, `cube:N`, `lobell:N`.
pub fn builtin(selector: &str) -> Result<Polytope> {
    let (head, arg) = match selector.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (selector, None),
    };
    let num = || -> Result<usize> {
        arg.and_then(|a| a.parse().ok())
            .ok_or_else(|| Error::InvalidPolytope(format!("selector {selector:?} needs a number")))
    };
    match head {
        "120cell" | "120-cell" => build_120cell(),
        "dodecahedron" => build_dodecahedron(),
        "cube" => build_cube(num()?),
        "lobell" => build_lobell(num()?),
        _ => Err(Error::InvalidPolytope(format!("unknown built-in polytope {selector:?}"))),
    }
}

struct Parser<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Self { lines, pos: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let line = self
            .lines
            .get(self.pos)
            .or(self.lines.last())
            .map(|l| l.0)
            .unwrap_or(0);
        Error::Parse { line, msg: msg.into() }
    }

    fn next(&mut self) -> Result<&'a str> {
        let l = self.lines.get(self.pos).map(|l| l.1).ok_or_else(|| self.err("unexpected end of file"))?;
        self.pos += 1;
        Ok(l)
    }

    fn keyed(&mut self, key: &str) -> Result<&'a str> {
        let l = self.next()?;
        match l.split_once(' ') {
            Some((k, v)) if k == key => Ok(v.trim()),
            _ => {
                self.pos -= 1;
                Err(self.err(format!("expected `{key} ...`, found {l:?}")))
            }
        }
    }

    fn keyed_usize(&mut self, key: &str) -> Result<usize> {
        let v = self.keyed(key)?;
        v.parse().map_err(|_| {
            self.pos -= 1;
            self.err(format!("bad number {v:?}"))
        })
    }

    fn parse(mut self) -> Result<Polytope> {
        let name = self.keyed("polytope")?.to_string();
        let dimension = self.keyed_usize("dimension")?;
        let facets = self.keyed_usize("facets")?;
        let declared = match self.lines.get(self.pos) {
            Some((_, l)) if l.starts_with("vertices ") => Some(self.keyed_usize("vertices")?),
            _ => None,
        };
        let edge_count = self.keyed_usize("adjacency")?;
        let mut edges = Vec::with_capacity(edge_count);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..edge_count {
            let l = self.next()?;
            let nums: Vec<usize> = l
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| self.back_err(format!("bad adjacency pair {l:?}")))?;
            if nums.len() != 2 || nums[0] == 0 || nums[1] == 0 {
                return Err(self.back_err(format!("bad adjacency pair {l:?}")));
            }
            let (i, j) = (nums[0] - 1, nums[1] - 1);
            if i == j {
                return Err(self.back_err(format!("nonzero diagonal: facet {} adjacent to itself", i + 1)));
            }
            if i > j {
                return Err(self.back_err(format!("pair {l:?} is not in increasing order")));
            }
            if i >= facets || j >= facets {
                return Err(self.back_err(format!("pair {l:?} out of range")));
            }
            if !seen.insert((i, j)) {
                return Err(self.back_err(format!("duplicate pair {l:?}")));
            }
            edges.push((i, j));
        }
        let mut p = Polytope::from_edges(name, dimension, facets, edges)?;
        if let Some(v) = declared {
            p = p.with_declared_vertices(v);
        }
        let l = self.next()?;
        if l == "centers" {
            let mut centers = Vec::with_capacity(facets);
            for k in 0..facets {
                let l = self.next()?;
                let toks: Vec<&str> = l.split_whitespace().collect();
                if toks.len() != 9 || toks[0].parse::<usize>().ok() != Some(k + 1) {
                    return Err(self.back_err(format!("bad center line {l:?}")));
                }
                let mut vals = Vec::with_capacity(8);
                for t in &toks[1..] {
                    vals.push(parse_rational(t).ok_or_else(|| self.back_err(format!("bad rational {t:?}")))?);
                }
                let q = |i: usize| QuadraticRational::new(vals[2 * i].clone(), vals[2 * i + 1].clone());
                centers.push(Quaternion::new(q(0), q(1), q(2), q(3)));
            }
            p = p.with_centers(centers)?;
            let l = self.next()?;
            if l != "end" {
                return Err(self.back_err(format!("expected `end`, found {l:?}")));
            }
        } else if l != "end" {
            return Err(self.back_err(format!("expected `centers` or `end`, found {l:?}")));
        }
        if self.pos != self.lines.len() {
            return Err(self.err("trailing content after `end`"));
        }
        Ok(p)
    }

    fn back_err(&mut self, msg: String) -> Error {
        self.pos -= 1;
        self.err(msg)
    }
}

fn parse_rational(t: &str) -> Option<BigRational> {
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(t.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[usize]) -> Vec<usize> {
        v.iter().map(|x| x + 1).collect()
    }

    #[test]
    fn cell120_basic_counts() {
        let p = build_120cell().unwrap();
        assert_eq!(p.facet_count(), 120);
        assert!((0..120).all(|i| p.degree(i) == 12));
        assert_eq!(p.edges().len(), 720);
        assert_eq!(p.cliques(3).len(), 1200);
        assert_eq!(p.vertices().len(), 600);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(p.is_adjacent(i, j), i != j);
            }
        }
        assert!(p.is_flag_consistent());
    }

    #[test]
    fn cell120_neighbor_sets() {
        let p = build_120cell().unwrap();
        assert_eq!(labels(&p.neighbors(0)), (2..=13).collect::<Vec<_>>());
        assert_eq!(
            labels(&p.block(1).members),
            vec![1, 2, 3, 4, 8, 10, 12, 14, 18, 26, 28, 30, 34]
        );
        assert_eq!(labels(&p.block(0).members), (1..=13).collect::<Vec<_>>());
    }

    #[test]
    fn cell120_layers() {
        let p = build_120cell().unwrap();
        let layers = p.layers(0).unwrap();
        let sizes: Vec<usize> = layers.iter().map(|l| l.len()).collect();
        assert_eq!(sizes, vec![1, 12, 20, 12, 30, 12, 20, 12, 1]);
        assert_eq!(layers[0], vec![0]);
        assert_eq!(labels(&layers[4]), (46..=75).collect::<Vec<_>>());
        // layer sizes are the same seen from any facet
        for base in [1, 17, 64, 119] {
            let s: Vec<usize> = p.layers(base).unwrap().iter().map(|l| l.len()).collect();
            assert_eq!(s, sizes);
        }
    }

    #[test]
    fn layers_need_centers() {
        assert!(matches!(build_cube(3).unwrap().layers(0), Err(Error::NoCenters)));
    }

    #[test]
    fn center_orders_by_layer() {
        let p = build_120cell().unwrap();
        let centers = p.centers().unwrap();
        let expected = [1, 10, 6, 5, 4, 10, 3, 5, 2];
        for (layer, want) in p.layers(0).unwrap().iter().zip(expected) {
            for &f in layer {
                assert_eq!(centers[f].multiplicative_order().unwrap(), want);
            }
        }
        assert!(centers.iter().all(|c| c.is_unit()));
    }

    #[test]
    fn cubes() {
        let sq = build_cube(2).unwrap();
        assert_eq!(sq.facet_count(), 4);
        assert!(!sq.is_adjacent(0, 2) && !sq.is_adjacent(1, 3));
        assert!(sq.is_adjacent(0, 1) && sq.is_adjacent(1, 2));
        let c3 = build_cube(3).unwrap();
        assert!((0..6).all(|i| c3.degree(i) == 4));
        assert_eq!(c3.cliques(3).len(), 8);
        for n in 1..=6 {
            let c = build_cube(n).unwrap();
            assert!(c.is_flag_consistent(), "cube {n}");
            assert_eq!(c.vertices().len(), 1 << n);
        }
        assert!(build_cube(7).is_err());
    }

    #[test]
    fn lobell_shapes() {
        let l6 = build_lobell(6).unwrap();
        assert_eq!(l6.facet_count(), 14);
        for i in 0..14 {
            let want = if i == 0 || i == 13 { 6 } else { 5 };
            assert_eq!(l6.degree(i), want, "facet {i}");
        }
        assert_eq!(build_lobell(7).unwrap().facet_count(), 16);
        assert!(build_lobell(4).is_err());
        for n in 5..=8 {
            let l = build_lobell(n).unwrap();
            assert!(l.is_flag_consistent());
            assert_eq!(l.vertices().len(), 4 * n);
        }
    }

    #[test]
    fn dodecahedron_blocks() {
        let d = build_dodecahedron().unwrap();
        assert_eq!(labels(&d.block(0).members), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(labels(&d.block(1).members), vec![1, 2, 3, 4, 7, 8]);
        assert!(d.is_flag_consistent());
        assert_eq!(d.vertices().len(), 20);
    }

    #[test]
    fn interchange_round_trip() {
        let p = build_120cell().unwrap();
        let text = p.to_interchange_string();
        let q = Polytope::parse_interchange(&text).unwrap();
        assert_eq!(p, q);
        assert_eq!(q.to_interchange_string(), text);

        let c4 = build_cube(4).unwrap();
        let back = Polytope::parse_interchange(&c4.to_interchange_string()).unwrap();
        assert_eq!(back, c4);
    }

    #[test]
    fn interchange_rejects_bad_input() {
        let bad_diag = "polytope x\ndimension 2\nfacets 3\nadjacency 1\n2 2\nend\n";
        assert!(matches!(Polytope::parse_interchange(bad_diag), Err(Error::Parse { .. })));
        let bad_order = "polytope x\ndimension 2\nfacets 3\nadjacency 1\n3 1\nend\n";
        assert!(Polytope::parse_interchange(bad_order).is_err());
        let truncated = "polytope x\ndimension 2\nfacets 3\nadjacency 2\n1 2\n";
        assert!(Polytope::parse_interchange(truncated).is_err());
        let trailing = "polytope x\ndimension 2\nfacets 2\nadjacency 1\n1 2\nend\nextra\n";
        assert!(Polytope::parse_interchange(trailing).is_err());
    }

    #[test]
    fn matrix_constructor_validates() {
        let asym = vec![vec![false, true], vec![false, false]];
        assert!(Polytope::from_adjacency_matrix("a", 1, &asym).is_err());
        let diag = vec![vec![true, false], vec![false, false]];
        assert!(Polytope::from_adjacency_matrix("d", 1, &diag).is_err());
        let ok = vec![vec![false, true], vec![true, false]];
        assert_eq!(Polytope::from_adjacency_matrix("ok", 1, &ok).unwrap().edges(), vec![(0, 1)]);
    }
}
