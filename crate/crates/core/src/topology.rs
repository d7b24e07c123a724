//! Homology of small covers through full subcomplexes of the dual sphere.
//!
//! `K` is the clique complex of the facet-adjacency graph. For a row-space
//! element with support `ω`, `K_ω` is the clique complex on `ω`, and
//! `β^i(M) = Σ_ω β̃^{i−1}(K_ω)` with `β̃^{−1}(∅) = 1`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed};

use crate::coloring::{orientation_functional, CharacteristicMatrix};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::polytopes::{low_mask, mask_to_vec, FacetMask, Polytope};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Z2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub field: Field,
    pub betti: Vec<usize>,
}

/// Clique complex of the adjacency graph restricted to `omega`.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    omega: FacetMask,
    neighbors: Vec<FacetMask>,
    max_simplex: usize,
}

impl SimplicialComplex {
    pub fn vertices(&self) -> Vec<usize> {
        mask_to_vec(self.omega)
    }

    pub fn support(&self) -> FacetMask {
        self.omega
    }

    pub fn is_empty(&self) -> bool {
        self.omega == 0
    }

    /// The `k`-dimensional simplices, each a sorted list of facet labels.
    pub fn simplices(&self, k: usize) -> Vec<Vec<usize>> {
        if k + 1 > self.max_simplex {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.collect(self.omega, k + 1, &mut stack, &mut out);
        out
    }

    fn collect(&self, cand: FacetMask, size: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if stack.len() == size {
            out.push(stack.clone());
            return;
        }
        let mut c = cand;
        while c != 0 {
            let v = c.trailing_zeros() as usize;
            c &= c - 1;
            stack.push(v);
            self.collect(c & self.neighbors[v], size, stack, out);
            stack.pop();
        }
    }

    /// Connected components by graph traversal, each sorted; ordered by least label.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut left = self.omega;
        let mut out = Vec::new();
        while left != 0 {
            let start = left.trailing_zeros() as usize;
            let mut comp: FacetMask = 1 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = self.neighbors[v] & self.omega & !comp;
                comp |= new;
                frontier |= new;
            }
            left &= !comp;
            out.push(mask_to_vec(comp));
        }
        out
    }

    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.max_simplex).map(|k| self.simplices(k).len()).collect()
    }
}

pub fn full_subcomplex(p: &Polytope, omega: FacetMask) -> SimplicialComplex {
    let omega = omega & low_mask(p.facet_count());
    SimplicialComplex {
        omega,
        neighbors: p.neighbor_masks().iter().map(|&nb| nb & omega).collect(),
        max_simplex: p.dimension(),
    }
}

trait ExactInt: Clone + Integer + Signed + CheckedMul + CheckedSub + From<i64> {}
impl ExactInt for i128 {}
impl ExactInt for BigInt {}

type SparseCol<T> = Vec<(usize, T)>;

/// `b·v − a·w` on sorted sparse columns, `None` on overflow.
fn combine<T: ExactInt>(b: &T, v: &SparseCol<T>, a: &T, w: &SparseCol<T>) -> Option<SparseCol<T>> {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        let take_v = j >= w.len() || (i < v.len() && v[i].0 < w[j].0);
        let take_w = i >= v.len() || (j < w.len() && w[j].0 < v[i].0);
        let (row, val) = if take_v {
            let r = (v[i].0, b.checked_mul(&v[i].1)?);
            i += 1;
            r
        } else if take_w {
            let r = (w[j].0, T::zero().checked_sub(&a.checked_mul(&w[j].1)?)?);
            j += 1;
            r
        } else {
            let r = (v[i].0, b.checked_mul(&v[i].1)?.checked_sub(&a.checked_mul(&w[j].1)?)?);
            i += 1;
            j += 1;
            r
        };
        if !val.is_zero() {
            out.push((row, val));
        }
    }
    let g = out.iter().fold(T::zero(), |g, (_, x)| g.gcd(x));
    if !g.is_zero() && g != T::one() {
        for (_, x) in out.iter_mut() {
            *x = x.div_floor(&g);
        }
    }
    Some(out)
}

/// Fraction-free column elimination; `None` if `T` overflows.
fn rank_exact<T: ExactInt>(cols: &[SparseCol<i64>]) -> Option<usize> {
    let mut pivots: HashMap<usize, SparseCol<T>> = HashMap::new();
    for col in cols {
        let mut v: SparseCol<T> = col.iter().map(|&(r, x)| (r, T::from(x))).collect();
        while let Some((lead, a)) = v.first().cloned() {
            match pivots.get(&lead) {
                Some(p) => {
                    let b = p[0].1.clone();
                    v = combine(&b, &v, &a, p)?;
                }
                None => {
                    if a.is_negative() {
                        for (_, x) in v.iter_mut() {
                            *x = -x.clone();
                        }
                    }
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    Some(pivots.len())
}

/// Exact rank over the rationals of an integer matrix given by sparse columns.
pub fn rank_rational(cols: &[SparseCol<i64>]) -> usize {
    rank_exact::<i128>(cols).unwrap_or_else(|| rank_exact::<BigInt>(cols).expect("BigInt never overflows"))
}

/// Rank over Z2 of a matrix given by the row indices of each column's ones.
pub fn rank_z2(cols: &[Vec<usize>], rows: usize) -> usize {
    let words = rows.div_ceil(64).max(1);
    let mut pivots: HashMap<usize, Vec<u64>> = HashMap::new();
    for col in cols {
        let mut v = vec![0u64; words];
        for &r in col {
            v[r / 64] ^= 1 << (r % 64);
        }
        while let Some(lead) = v.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, w)| 64 * k + w.trailing_zeros() as usize) {
            match pivots.get(&lead) {
                Some(p) => v.iter_mut().zip(p).for_each(|(a, b)| *a ^= b),
                None => {
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Rank of the boundary map from `k`-simplices to `(k−1)`-simplices; the
/// map from vertices is the augmentation.
fn boundary_rank(k_simplices: &[Vec<usize>], lower: &[Vec<usize>], field: Field) -> usize {
    if k_simplices.is_empty() {
        return 0;
    }
    if k_simplices[0].len() == 1 {
        return 1;
    }
    let index: HashMap<&[usize], usize> = lower.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let faces = |s: &Vec<usize>| -> Vec<(usize, i64)> {
        (0..s.len())
            .map(|drop| {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(t, _)| t != drop).map(|(_, &f)| f).collect();
                let sign = if drop % 2 == 0 { 1 } else { -1 };
                (index[face.as_slice()], sign)
            })
            .collect()
    };
    match field {
        Field::Rationals => {
            let cols: Vec<SparseCol<i64>> = k_simplices
                .iter()
                .map(|s| {
                    let mut c: SparseCol<i64> = faces(s);
                    c.sort_unstable();
                    c
                })
                .collect();
            rank_rational(&cols)
        }
        Field::Z2 => {
            let cols: Vec<Vec<usize>> = k_simplices.iter().map(|s| faces(s).into_iter().map(|(r, _)| r).collect()).collect();
            rank_z2(&cols, lower.len())
        }
    }
}

/// Reduced Betti numbers `β̃_{−1}, β̃_0, …, β̃_{d}` where `d` is the top simplex dimension.
pub fn reduced_betti_all(k: &SimplicialComplex, field: Field) -> Vec<usize> {
    let simplices: Vec<Vec<Vec<usize>>> = (0..k.max_simplex).map(|d| k.simplices(d)).collect();
    let mut ranks = vec![0usize; k.max_simplex + 1];
    for d in 0..k.max_simplex {
        let lower: &[Vec<usize>] = if d == 0 { &[] } else { &simplices[d - 1] };
        ranks[d] = boundary_rank(&simplices[d], lower, field);
    }
    let mut out = vec![1 - ranks[0]];
    for d in 0..k.max_simplex {
        out.push(simplices[d].len() - ranks[d] - ranks[d + 1]);
    }
    out
}

/// `β̃_i(K)` for `i ≥ −1`.
pub fn reduced_betti(k: &SimplicialComplex, i: isize, field: Field) -> usize {
    if i < -1 || i >= k.max_simplex as isize {
        return 0;
    }
    reduced_betti_all(k, field)[(i + 1) as usize]
}

/// Reduced Betti numbers of `K_ω` from component counts and Alexander
/// duality on the boundary sphere, for polytopes of dimension at most 4.
pub fn reduced_betti_by_duality(p: &Polytope, omega: FacetMask) -> Vec<usize> {
    let n = p.dimension();
    assert!((2..=4).contains(&n), "duality oracle covers dimensions 2..=4");
    let all = low_mask(p.facet_count());
    let omega = omega & all;
    let k = full_subcomplex(p, omega);
    let mut out = vec![0usize; n + 1];
    if omega == 0 {
        out[0] = 1;
        return out;
    }
    if omega == all {
        out[n] = 1;
        return out;
    }
    let comps = k.components().len();
    let dual = full_subcomplex(p, all & !omega).components().len();
    out[1] = comps - 1;
    // β̃_{n−2}(K_ω) = β̃_0(K_{ω^c})
    out[n - 1] += dual - 1;
    if n == 4 {
        let chi: isize = k.f_vector().iter().enumerate().map(|(d, &f)| if d % 2 == 0 { f as isize } else { -(f as isize) }).sum::<isize>() - 1;
        // χ̃ = β̃0 − β̃1 + β̃2 for proper subcomplexes of the 3-sphere
        out[2] = (out[1] as isize + out[3] as isize - chi) as usize;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSpaceElement {
    /// Row combination, bit `r` for row `r`.
    pub combination: u32,
    pub omega: FacetMask,
}

/// One element per distinct support, in order of the first combination producing it.
pub fn row_space(lambda: &CharacteristicMatrix) -> Vec<RowSpaceElement> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for comb in 0u32..1 << lambda.rows() {
        let omega = lambda
            .columns()
            .iter()
            .enumerate()
            .filter(|&(_, &c)| (comb & c as u32).count_ones() % 2 == 1)
            .fold(0u128, |m, (j, _)| m | 1 << j);
        if seen.insert(omega) {
            out.push(RowSpaceElement { combination: comb, omega });
        }
    }
    out
}

/// Per-ω reduced Betti vectors for the whole row space.
pub fn row_space_breakdown(p: &Polytope, lambda: &CharacteristicMatrix, field: Field, exec: Execution) -> Vec<(RowSpaceElement, Vec<usize>)> {
    let elems = row_space(lambda);
    let bettis = par::map(exec, &elems, |e| reduced_betti_all(&full_subcomplex(p, e.omega), field));
    elems.into_iter().zip(bettis).collect()
}

/// `β^i(M(P, Λ)) = Σ_{ω ∈ row Λ} β̃^{i−1}(K_ω)`.
pub fn betti_choi_park(p: &Polytope, lambda: &CharacteristicMatrix, i: usize, field: Field) -> usize {
    betti_table(p, lambda, field, Execution::default()).betti[i]
}

pub fn betti_table(p: &Polytope, lambda: &CharacteristicMatrix, field: Field, exec: Execution) -> BettiTable {
    let n = p.dimension();
    let mut betti = vec![0usize; n + 1];
    for (_, red) in row_space_breakdown(p, lambda, field, exec) {
        // red[k] is β̃_{k−1}
        for (i, b) in betti.iter_mut().enumerate() {
            *b += red[i];
        }
    }
    BettiTable { field, betti }
}

/// h-vector of the dual simplicial sphere from its f-vector.
pub fn h_vector(p: &Polytope) -> Vec<i64> {
    let n = p.dimension() as i64;
    let mut f = vec![1i64];
    f.extend(p.f_vector().iter().map(|&x| x as i64));
    let binom = |a: i64, b: i64| -> i64 {
        if b < 0 || b > a {
            return 0;
        }
        (0..b).fold(1i64, |acc, t| acc * (a - t) / (t + 1))
    };
    (0..=n)
        .map(|k| (0..=k).map(|i| if (k - i) % 2 == 0 { 1 } else { -1 } * binom(n - i, k - i) * f[i as usize]).sum())
        .collect()
}

pub fn mod2_betti_from_hvector(p: &Polytope) -> BettiTable {
    BettiTable {
        field: Field::Z2,
        betti: h_vector(p).into_iter().map(|h| h as usize).collect(),
    }
}

pub fn euler_characteristic(b: &BettiTable) -> i64 {
    b.betti.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
}

/// An even, signature-zero form `⊕_{rank/2} H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionForm {
    pub rank: usize,
    pub hyperbolic_summands: usize,
    pub even: bool,
    pub signature: i64,
}

impl std::fmt::Display for IntersectionForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "⊕{} H (rank {}, even, signature {})", self.hyperbolic_summands, self.rank, self.signature)
    }
}

/// The intersection form of an oriented 4-dimensional small cover or real
/// toric manifold; evenness and vanishing signature are asserted, not derived.
pub fn intersection_form_report(p: &Polytope, lambda: &CharacteristicMatrix) -> Result<IntersectionForm> {
    if p.dimension() != 4 {
        return Err(Error::InvalidTask("intersection forms need a 4-dimensional polytope".into()));
    }
    if orientation_functional(lambda.columns(), lambda.rows()).is_none() {
        return Err(Error::NonOrientable);
    }
    let b2 = betti_choi_park(p, lambda, 2, Field::Rationals);
    if b2 % 2 == 1 {
        return Err(Error::Integrity(format!("odd second Betti number {b2} for an even form")));
    }
    Ok(IntersectionForm {
        rank: b2,
        hyperbolic_summands: b2 / 2,
        even: true,
        signature: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{published_vector, z25_extension, ColoringVector};
    use crate::polytopes::{build_120cell, build_cube};

    #[test]
    fn small_complexes() {
        let p = build_120cell().unwrap();
        let empty = full_subcomplex(&p, 0);
        assert_eq!(reduced_betti(&empty, -1, Field::Rationals), 1);
        assert_eq!(reduced_betti(&empty, 0, Field::Rationals), 0);
        let point = full_subcomplex(&p, 1);
        assert_eq!(reduced_betti_all(&point, Field::Rationals), vec![0, 0, 0, 0, 0]);
        // F1 is adjacent to every other facet of its block: a cone
        let cone = full_subcomplex(&p, low_mask(13));
        assert_eq!(reduced_betti_all(&cone, Field::Rationals), vec![0; 5]);
        let sphere = full_subcomplex(&p, low_mask(120));
        assert_eq!(reduced_betti_all(&sphere, Field::Rationals), vec![0, 0, 0, 0, 1]);
        assert_eq!(reduced_betti_all(&sphere, Field::Z2), vec![0, 0, 0, 0, 1]);
    }

    #[test]
    fn two_points() {
        let p = build_120cell().unwrap();
        let k = full_subcomplex(&p, 1 | 1 << 119);
        assert_eq!(reduced_betti(&k, 0, Field::Rationals), 1);
        assert_eq!(k.components().len(), 2);
        assert_eq!(reduced_betti_by_duality(&p, 1 | 1 << 119), vec![0, 1, 0, 0, 0]);
    }

    #[test]
    fn rank_helpers() {
        let cols = vec![vec![(0, 2), (1, 4)], vec![(0, 1), (1, 2)], vec![(1, 3)]];
        assert_eq!(rank_rational(&cols), 2);
        assert_eq!(rank_z2(&[vec![0, 1], vec![1, 2], vec![0, 2]], 3), 2);
        let big = vec![vec![(0, i64::MAX), (1, 3)], vec![(0, 3), (1, i64::MAX)]];
        assert_eq!(rank_rational(&big), 2);
    }

    #[test]
    fn h_vectors() {
        let p = build_120cell().unwrap();
        assert_eq!(h_vector(&p), vec![1, 116, 366, 116, 1]);
        assert_eq!(h_vector(&build_cube(4).unwrap()), vec![1, 4, 6, 4, 1]);
        let b = mod2_betti_from_hvector(&p);
        assert_eq!(b.betti.iter().sum::<usize>(), 600);
        assert_eq!(euler_characteristic(&b), 136);
    }

    #[test]
    fn torus_from_square() {
        // colors (1,2,1,2) on the square give the torus
        let sq = build_cube(2).unwrap();
        let v = ColoringVector::new(vec![1, 2, 1, 2]).unwrap();
        let t = betti_table(&sq, &CharacteristicMatrix::from_coloring(&v, 2), Field::Rationals, Execution::Sequential);
        assert_eq!(t.betti, vec![1, 2, 1]);
    }

    #[test]
    fn five_coloring_double_cover() {
        let p = build_120cell().unwrap();
        let d = z25_extension(&published_vector(59)).unwrap();
        assert_eq!(row_space(&d).len(), 32);
        let t = betti_table(&p, &d, Field::Rationals, Execution::default());
        assert_eq!(t.betti, vec![1, 115, 500, 115, 1]);
        assert_eq!(euler_characteristic(&t), 272);
    }

    #[test]
    fn oracles_agree_on_row_space() {
        let p = build_120cell().unwrap();
        let d = z25_extension(&published_vector(60)).unwrap();
        for e in row_space(&d) {
            let k = full_subcomplex(&p, e.omega);
            assert_eq!(reduced_betti_all(&k, Field::Rationals), reduced_betti_by_duality(&p, e.omega));
        }
    }
}
