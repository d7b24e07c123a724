//! Z2^n colorings of facets.
//!
//! A color is the integer whose binary digits are the coordinates of a
//! nonzero vector in Z2^n, so XOR is addition and popcount decides parity.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::polytopes::Polytope;

pub type Color = u8;

/// Largest supported number of color bits.
pub const MAX_BITS: usize = 6;

const PUBLISHED: &str = include_str!("../data/published_vectors.txt");

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoringVector {
    colors: Vec<Color>,
}

impl fmt::Debug for ColoringVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ColoringVector({})", encode_hex(self))
    }
}

impl ColoringVector {
    pub fn new(colors: Vec<Color>) -> Result<Self> {
        if let Some(pos) = colors.iter().position(|&c| c == 0) {
            return Err(Error::InvalidColoring(format!("facet {} has color 0", pos + 1)));
        }
        Ok(Self { colors })
    }

    /// Skips the nonzero check; callers guarantee it.
    pub(crate) fn from_raw(colors: Vec<Color>) -> Self {
        debug_assert!(colors.iter().all(|&c| c != 0));
        Self { colors }
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, i: usize) -> Color {
        self.colors[i]
    }

    pub fn into_colors(self) -> Vec<Color> {
        self.colors
    }

    pub fn palette(&self) -> BTreeSet<Color> {
        self.colors.iter().copied().collect()
    }
}

/// XOR rank of a list of colors.
pub fn xor_rank(colors: impl IntoIterator<Item = Color>) -> usize {
    let mut basis = [0u8; 8];
    let mut rank = 0;
    for mut c in colors {
        for b in (0..8).rev() {
            if c >> b & 1 == 0 {
                continue;
            }
            if basis[b] == 0 {
                basis[b] = c;
                rank += 1;
                break;
            }
            c ^= basis[b];
        }
    }
    rank
}

/// The span of `colors` as a bitmask over the 2^MAX_BITS group elements.
pub fn span_mask(colors: &[Color]) -> u64 {
    let mut elems: Vec<u8> = vec![0];
    for &c in colors {
        let shifted: Vec<u8> = elems.iter().map(|&e| e ^ c).collect();
        elems.extend(shifted);
    }
    elems.iter().fold(0u64, |m, &e| m | 1 << e)
}

pub fn is_nonsingular(p: &Polytope, v: &ColoringVector) -> bool {
    let n = p.dimension();
    v.len() == p.facet_count()
        && p
            .vertices()
            .iter()
            .all(|vert| xor_rank(vert.iter().map(|&f| v.color(f))) == n)
}

/// Non-singularity restricted to the vertices whose facets are all colored
/// (`0` marks an uncolored facet).
pub fn is_locally_nonsingular(p: &Polytope, partial: &[Color]) -> bool {
    let n = p.dimension();
    p.vertices().iter().all(|vert| {
        vert.iter().any(|&f| partial[f] == 0) || xor_rank(vert.iter().map(|&f| partial[f])) == n
    })
}

/// Whether color `c` on facet `i` avoids the span of every colored clique
/// `S ⊆ N(i)` with `|S| ≤ n − 1`.
pub fn simplex_admissible(p: &Polytope, partial: &[Color], i: usize, c: Color) -> bool {
    let colored: u128 = (0..p.facet_count())
        .filter(|&j| partial[j] != 0)
        .fold(0, |m, j| m | 1 << j);
    let cand = p.neighbor_mask(i) & colored;
    let mut stack = Vec::new();
    admissible_rec(p, partial, cand, p.dimension() - 1, c, &mut stack)
}

fn admissible_rec(p: &Polytope, partial: &[Color], cand: u128, max: usize, c: Color, stack: &mut Vec<Color>) -> bool {
    if !stack.is_empty() && span_mask(stack) >> c & 1 == 1 {
        return false;
    }
    if stack.len() == max {
        return true;
    }
    let mut rest = cand;
    while rest != 0 {
        let j = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        stack.push(partial[j]);
        let ok = admissible_rec(p, partial, rest & p.neighbor_mask(j), max, c, stack);
        stack.pop();
        if !ok {
            return false;
        }
    }
    true
}

fn parity(x: u32) -> u32 {
    x.count_ones() & 1
}

/// Orientable iff some linear functional takes the value 1 on every color.
pub fn is_orientable(v: &ColoringVector, bits: usize) -> bool {
    orientation_functional(v.colors(), bits).is_some()
}

pub fn orientation_functional(colors: &[Color], bits: usize) -> Option<u32> {
    let distinct: BTreeSet<Color> = colors.iter().copied().collect();
    (1u32..1 << bits).find(|&f| distinct.iter().all(|&c| parity(f & c as u32) == 1))
}

/// Hex digits for colors up to 15; comma-separated decimals otherwise.
pub fn encode_hex(v: &ColoringVector) -> String {
    if v.colors().iter().all(|&c| c <= 15) {
        v.colors().iter().map(|&c| char::from_digit(c as u32, 16).unwrap()).collect()
    } else {
        v.colors().iter().map(|c| c.to_string()).join(",")
    }
}

pub fn decode_hex(text: &str, expected_len: Option<usize>) -> Result<ColoringVector> {
    let text = text.trim();
    let colors: Vec<Color> = if text.contains(',') {
        text.split(',')
            .map(|t| {
                t.trim()
                    .parse::<Color>()
                    .ok()
                    .filter(|&c| c != 0 && (c as usize) < 1 << MAX_BITS)
                    .ok_or_else(|| Error::InvalidColoring(format!("bad color {t:?}")))
            })
            .collect::<Result<_>>()?
    } else {
        text.chars()
            .map(|ch| match ch.to_digit(16) {
                Some(d) if d != 0 && !ch.is_ascii_uppercase() => Ok(d as Color),
                _ => Err(Error::InvalidColoring(format!("bad hex digit {ch:?}"))),
            })
            .collect::<Result<_>>()?
    };
    if let Some(m) = expected_len {
        if colors.len() != m {
            return Err(Error::InvalidColoring(format!("expected {m} colors, found {}", colors.len())));
        }
    }
    ColoringVector::new(colors)
}

/// Decodes and checks non-singularity over `p`.
pub fn decode_checked(text: &str, p: &Polytope) -> Result<ColoringVector> {
    let v = decode_hex(text, Some(p.facet_count()))?;
    if !is_nonsingular(p, &v) {
        return Err(Error::InvalidColoring(format!("{} is singular", encode_hex(&v))));
    }
    Ok(v)
}

/// Table mapping each color to its coordinates in the basis `basis`, or
/// `None` when `basis` is dependent.
pub fn coordinate_table(basis: &[Color]) -> Option<Vec<Color>> {
    let n = basis.len();
    let mut table = vec![0u8; 1 << n];
    let mut seen = vec![false; 1 << n];
    for s in 0..1usize << n {
        let x = (0..n).filter(|&k| s >> k & 1 == 1).fold(0u8, |a, k| a ^ basis[k]) as usize;
        if x >= 1 << n || seen[x] {
            return None;
        }
        seen[x] = true;
        table[x] = s as Color;
    }
    Some(table)
}

/// The GL_n(Z2) image of `v` whose first `n` colors are `1, 2, 4, …`.
pub fn gl_normalize(v: &ColoringVector, n: usize) -> Result<ColoringVector> {
    let table = coordinate_table(&v.colors()[..n])
        .ok_or_else(|| Error::InvalidColoring("first facets do not carry a basis".into()))?;
    Ok(ColoringVector::from_raw(v.colors().iter().map(|&c| table[c as usize]).collect()))
}

/// Applies the linear map sending `e_k` to `images[k]`.
pub fn apply_linear(images: &[Color], v: &ColoringVector) -> ColoringVector {
    let map = |c: Color| {
        (0..images.len())
            .filter(|&k| c >> k & 1 == 1)
            .fold(0u8, |a, k| a ^ images[k])
    };
    ColoringVector::from_raw(v.colors().iter().map(|&c| map(c)).collect())
}

/// All invertible n×n matrices over Z2, as image lists of the basis vectors.
pub fn general_linear_group(n: usize) -> Vec<Vec<Color>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    gl_rec(n, &mut cur, &mut out);
    out
}

fn gl_rec(n: usize, cur: &mut Vec<Color>, out: &mut Vec<Vec<Color>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    let span = span_mask(cur);
    for c in 1..1u8 << n {
        if span >> c & 1 == 0 {
            cur.push(c);
            gl_rec(n, cur, out);
            cur.pop();
        }
    }
}

/// The colors of Z2^4 outside the standard basis.
pub const NON_BASIS_COLORS: [Color; 11] = [3, 5, 6, 7, 9, 10, 11, 12, 13, 14, 15];

fn permute_bits(c: Color, perm: &[usize]) -> Color {
    (0..perm.len()).filter(|&k| c >> k & 1 == 1).fold(0, |a, k| a | 1 << perm[k])
}

/// Orbit representatives of `(k−4)`-subsets of the non-basis colors under
/// coordinate permutations, each the lexicographically smallest sorted tuple
/// of its orbit; the list itself is sorted.
pub fn added_color_representatives(k: usize) -> Vec<Vec<Color>> {
    if !(4..=15).contains(&k) {
        return Vec::new();
    }
    let perms: Vec<Vec<usize>> = (0..4).permutations(4).collect();
    let mut reps = BTreeSet::new();
    for subset in NON_BASIS_COLORS.iter().copied().combinations(k - 4) {
        let rep = perms
            .iter()
            .map(|p| {
                let mut img: Vec<Color> = subset.iter().map(|&c| permute_bits(c, p)).collect();
                img.sort_unstable();
                img
            })
            .min()
            .unwrap();
        reps.insert(rep);
    }
    reps.into_iter().collect()
}

/// The full palette for a set of added colors over `n` bits.
pub fn palette_with(n: usize, added: &[Color]) -> Vec<Color> {
    let mut p: BTreeSet<Color> = (0..n).map(|k| 1 << k).collect();
    p.extend(added.iter().copied());
    p.into_iter().collect()
}

/// `k × m` bit matrix stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicMatrix {
    rows: usize,
    columns: Vec<Color>,
}

impl CharacteristicMatrix {
    pub fn from_coloring(v: &ColoringVector, rows: usize) -> Self {
        Self {
            rows,
            columns: v.colors().to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn columns(&self) -> &[Color] {
        &self.columns
    }

    pub fn row(&self, r: usize) -> Vec<bool> {
        self.columns.iter().map(|&c| c >> r & 1 == 1).collect()
    }

    pub fn rank(&self) -> usize {
        xor_rank(self.columns.iter().copied())
    }
}

/// Appends a fifth coordinate so that every column has odd weight.
pub fn z25_extension(v: &ColoringVector) -> Result<CharacteristicMatrix> {
    if is_orientable(v, 4) {
        return Err(Error::OrientableExtension);
    }
    let columns = v
        .colors()
        .iter()
        .map(|&c| if c.count_ones() % 2 == 0 { c | 16 } else { c })
        .collect();
    Ok(CharacteristicMatrix { rows: 5, columns })
}

/// The 60 result vectors printed in the reference tables, in order.
pub fn published_vectors() -> Vec<ColoringVector> {
    PUBLISHED
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| decode_hex(l, Some(120)).expect("bundled vector table is well formed"))
        .collect()
}

/// The `k`-th published vector, 1-based.
pub fn published_vector(k: usize) -> ColoringVector {
    published_vectors()[k - 1].clone()
}
