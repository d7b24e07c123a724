use std::collections::HashMap;
use std::sync::Arc;

use crate::coloring::{Color, ColoringVector};
use crate::error::{Error, Result};
use crate::par;
use crate::polytopes::{mask_to_vec, Polytope};
use crate::symmetries::{symmetry_group, transfer_permutations, FacetPermutation};

use super::recursion::color_recursion;
use super::SearchTask;

/// Rows are packed eight bits per block slot, so blocks hold at most 16 facets.
const MAX_BLOCK: usize = 16;

/// The 120-cell pasting order after block 1, 1-based.
const SEQ_120: [&[usize]; 4] = [
    &[2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13],
    &[
        14, 18, 26, 28, 30, 34, 16, 20, 32, 36, 22, 23, 38, 15, 19, 27, 29, 31, 35, 17, 21, 33, 37, 39, 24, 25,
        40, 41, 42, 43, 44, 45,
    ],
    &[
        49, 53, 57, 50, 54, 58, 51, 55, 59, 52, 56, 60, 64, 68, 72, 65, 69, 73, 66, 70, 74, 67, 71, 75, 46, 61,
        48, 63, 47, 62, 76, 77, 78, 79, 80, 81, 82, 83, 84, 85, 86, 87,
    ],
    &[
        96, 97, 104, 105, 100, 102, 88, 89, 101, 90, 91, 106, 107, 98, 99, 103, 92, 93, 94, 95, 108, 109, 110,
        111, 112, 113, 114, 115, 116, 117, 118, 119, 120,
    ],
];

/// All locally non-singular colorings of the block of facet 0.
#[derive(Clone, Debug)]
pub struct BlockSet {
    /// Sorted facet labels of the block.
    pub members: Vec<usize>,
    /// Packed rows, slot `k` colors `members[k]`; sorted.
    pub rows: Vec<u128>,
}

impl BlockSet {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row_colors(&self, r: usize) -> Vec<Color> {
        unpack(self.rows[r], self.members.len())
    }
}

fn pack(colors: &[Color]) -> u128 {
    colors.iter().enumerate().fold(0, |acc, (k, &c)| acc | (c as u128) << (8 * k))
}

fn unpack(row: u128, len: usize) -> Vec<Color> {
    (0..len).map(|k| slot(row, k)).collect()
}

#[inline]
fn slot(row: u128, k: usize) -> Color {
    (row >> (8 * k)) as Color
}

fn slot_mask(slots: u32) -> u128 {
    (0..32).filter(|k| slots >> k & 1 == 1).fold(0, |acc, k| acc | 0xffu128 << (8 * k))
}

/// The unfix set `B1`, computed by recursion on the block's induced
/// subpolytope without normalization.
pub fn unfix_set(task: &SearchTask<'_>) -> Result<BlockSet> {
    let p = task.polytope;
    let members = p.block(0).members;
    if members.len() > MAX_BLOCK {
        return Err(Error::InvalidTask(format!("block of {} facets exceeds {MAX_BLOCK}", members.len())));
    }
    let sub = p.induced(&members)?;
    let mut t = SearchTask::new(&sub, &task.palette).unnormalized();
    t.execution = task.execution;
    let mut rows: Vec<u128> = color_recursion(&t)?.iter().map(|v| pack(v.colors())).collect();
    rows.sort_unstable();
    Ok(BlockSet { members, rows })
}

/// Rows of `B1` that color the first `n` facets with the standard basis.
pub fn fixing_set(b1: &BlockSet, n: usize) -> Vec<u128> {
    let want = pack(&(0..n).map(|k| 1u8 << k).collect::<Vec<_>>());
    let mask = slot_mask((1 << n) - 1);
    b1.rows.iter().copied().filter(|r| r & mask == want).collect()
}

/// For each facet of `b_i` in increasing order, the 1-based column of `B1`
/// that lands there, given the images of the `B1` columns.
pub fn rearrange_order(images_of_b1: &[usize]) -> Vec<usize> {
    let mut cols: Vec<(usize, usize)> = images_of_b1.iter().enumerate().map(|(k, &f)| (f, k + 1)).collect();
    cols.sort_unstable();
    cols.into_iter().map(|(_, k)| k).collect()
}

/// `B_i` as length-`m` truncated vectors (0 off the block), sorted.
pub fn derived_block_set(b1: &BlockSet, t: &FacetPermutation) -> Vec<Vec<Color>> {
    let m = t.len();
    let mut out: Vec<Vec<Color>> = (0..b1.len())
        .map(|r| {
            let mut v = vec![0; m];
            for (k, c) in b1.row_colors(r).into_iter().enumerate() {
                v[t.image(b1.members[k])] = c;
            }
            v
        })
        .collect();
    out.sort_unstable();
    out
}

/// Union of two truncated vectors that agree wherever both are colored.
pub fn paste(u: &[Color], v: &[Color]) -> Option<Vec<Color>> {
    if u.len() != v.len() {
        return None;
    }
    u.iter()
        .zip(v)
        .map(|(&a, &b)| match (a, b) {
            (0, b) => Some(b),
            (a, 0) => Some(a),
            (a, b) if a == b => Some(a),
            _ => None,
        })
        .collect()
}

/// Blocks to paste after block 0, as 0-based facet labels.
pub fn pasting_sequence(p: &Polytope) -> Vec<usize> {
    if p.facet_count() == 120 && p.centers().is_some() {
        SEQ_120.iter().flat_map(|s| s.iter().map(|&f| f - 1)).collect()
    } else {
        (1..p.facet_count()).collect()
    }
}

#[derive(Clone, Debug)]
struct Stage {
    /// Facet receiving slot `k` of a `B1` row.
    facets: Vec<usize>,
    /// Slots already colored when the stage starts.
    known: u32,
    fresh: Vec<usize>,
}

/// `B1` rows sorted by their projection on a fixed slot set, then by value.
#[derive(Debug)]
struct Index {
    mask: u128,
    rows: Vec<u128>,
}

impl Index {
    fn build(b1: &BlockSet, known: u32) -> Self {
        let mask = slot_mask(known);
        let mut rows = b1.rows.clone();
        rows.sort_unstable_by_key(|&r| (r & mask, r));
        Self { mask, rows }
    }

    fn matches(&self, key: u128) -> &[u128] {
        let lo = self.rows.partition_point(|&r| r & self.mask < key);
        let hi = lo + self.rows[lo..].partition_point(|&r| r & self.mask == key);
        &self.rows[lo..hi]
    }
}

/// Everything block pasting needs besides the seeds.
pub struct PastingPlan {
    m: usize,
    stages: Vec<Stage>,
    indexes: Vec<Arc<Index>>,
    full: Vec<u128>,
    forced: Vec<Color>,
    threshold: usize,
    pub b1: BlockSet,
    pub seeds: Vec<u128>,
}

impl PastingPlan {
    pub fn new(task: &SearchTask<'_>) -> Result<Self> {
        let p = task.polytope;
        let m = p.facet_count();
        let n = p.dimension();
        let forced = task.forced_colors()?;
        if !task.normalize {
            return Err(Error::InvalidTask("block pasting requires a normalized task".into()));
        }
        let group = symmetry_group(p)?;
        let transfers = transfer_permutations(&group, m, task.transfer)
            .map_err(|e| Error::InvalidTask(format!("block pasting needs a facet-transitive polytope: {e}")))?;
        let b1 = unfix_set(task)?;
        let width = b1.members.len();
        let full_slots = (1u32 << width) - 1;

        let mut seeds = fixing_set(&b1, n);
        seeds.retain(|&r| (0..width).all(|k| forced[b1.members[k]] == 0 || forced[b1.members[k]] == slot(r, k)));

        let mut covered: u128 = b1.members.iter().fold(0, |acc, &f| acc | 1 << f);
        let mut stages = Vec::new();
        for i in pasting_sequence(p) {
            let t = &transfers[i];
            let facets: Vec<usize> = b1.members.iter().map(|&f| t.image(f)).collect();
            let known = (0..width).filter(|&k| covered >> facets[k] & 1 == 1).fold(0u32, |a, k| a | 1 << k);
            let fresh = (0..width).filter(|&k| known >> k & 1 == 0).collect();
            covered |= facets.iter().fold(0u128, |acc, &f| acc | 1 << f);
            stages.push(Stage { facets, known, fresh });
        }
        if covered.count_ones() as usize != m {
            return Err(Error::Integrity(format!(
                "pasting sequence leaves facets {:?} uncovered",
                mask_to_vec(!covered & crate::polytopes::low_mask(m)).iter().map(|f| f + 1).collect::<Vec<_>>()
            )));
        }

        let mut cache: HashMap<u32, Arc<Index>> = HashMap::new();
        let indexes = stages
            .iter()
            .map(|s| {
                cache
                    .entry(s.known)
                    .or_insert_with(|| Arc::new(if s.known == full_slots { Index { mask: 0, rows: Vec::new() } } else { Index::build(&b1, s.known) }))
                    .clone()
            })
            .collect();
        Ok(Self {
            m,
            stages,
            indexes,
            full: b1.rows.clone(),
            forced,
            threshold: task.split_threshold,
            b1,
            seeds,
        })
    }

    pub fn stage_count(&self) -> usize {
        self.stages.len()
    }

    /// Distinct overlap patterns across stages (one index each).
    pub fn index_count(&self) -> usize {
        let mut ks: Vec<u32> = self.stages.iter().map(|s| s.known).collect();
        ks.sort_unstable();
        ks.dedup();
        ks.len()
    }

    /// All complete vectors grown from one seed row, unsorted.
    pub fn run_seed(&self, seed: u128) -> Vec<Vec<Color>> {
        let mut row = vec![0u8; self.m];
        for (k, &f) in self.b1.members.iter().enumerate() {
            row[f] = slot(seed, k);
        }
        let mut out = Vec::new();
        self.process(0, &row, &mut out);
        out
    }

    fn process(&self, stage: usize, rows: &[u8], out: &mut Vec<Vec<Color>>) {
        let m = self.m;
        if stage == self.stages.len() {
            out.extend(rows.chunks_exact(m).map(|r| r.to_vec()));
            return;
        }
        let st = &self.stages[stage];
        let full = st.fresh.is_empty();
        let index = &self.indexes[stage];
        let mut buffer: Vec<u8> = Vec::new();
        for row in rows.chunks_exact(m) {
            let key = (0..st.facets.len())
                .filter(|&k| st.known >> k & 1 == 1)
                .fold(0u128, |acc, k| acc | (row[st.facets[k]] as u128) << (8 * k));
            if full {
                if self.full.binary_search(&key).is_ok() {
                    buffer.extend_from_slice(row);
                }
            } else {
                'rows: for &r in index.matches(key) {
                    for &k in &st.fresh {
                        let f = st.facets[k];
                        if self.forced[f] != 0 && self.forced[f] != slot(r, k) {
                            continue 'rows;
                        }
                    }
                    let start = buffer.len();
                    buffer.extend_from_slice(row);
                    for &k in &st.fresh {
                        buffer[start + st.facets[k]] = slot(r, k);
                    }
                }
            }
            // oversized intermediate sets are finished piecewise, depth-first
            if buffer.len() >= self.threshold * m {
                self.process(stage + 1, &buffer, out);
                buffer.clear();
            }
        }
        if !buffer.is_empty() {
            self.process(stage + 1, &buffer, out);
        }
    }
}

pub fn block_pasting(task: &SearchTask<'_>) -> Result<Vec<ColoringVector>> {
    let plan = PastingPlan::new(task)?;
    let parts = par::map(task.execution, &plan.seeds, |&s| plan.run_seed(s));
    let mut all: Vec<Vec<Color>> = parts.into_iter().flatten().filter(|v| task.accepts(v)).collect();
    all.sort_unstable();
    all.dedup();
    Ok(all.into_iter().map(ColoringVector::from_raw).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{palette_with, Color};
    use crate::polytopes::{build_120cell, build_cube, build_dodecahedron};
    use crate::search::color_recursion;
    use crate::symmetries::TransferSelection;

    #[test]
    fn paste_examples() {
        let x1 = [1, 2, 4, 4, 2, 6, 0, 0, 0, 0, 0, 0];
        let y1 = [1, 2, 4, 4, 0, 0, 1, 7, 0, 0, 0, 0];
        assert_eq!(paste(&x1, &y1).unwrap(), vec![1, 2, 4, 4, 2, 6, 1, 7, 0, 0, 0, 0]);
        let x2 = [1, 2, 3, 5, 2, 6, 0, 0, 0, 0, 0, 0];
        assert!(paste(&x2, &y1).is_none());
        assert_eq!(paste(&x1, &[0; 12]).unwrap(), x1.to_vec());
    }

    #[test]
    fn table3_rearrangement() {
        let images = [2, 34, 26, 14, 12, 1, 10, 28, 8, 30, 4, 18, 3];
        assert_eq!(rearrange_order(&images), vec![6, 1, 13, 11, 9, 7, 5, 4, 12, 3, 8, 10, 2]);
    }

    #[test]
    fn sequence_is_a_permutation() {
        let p = build_120cell().unwrap();
        let mut s = pasting_sequence(&p);
        assert_eq!(s.len(), 119);
        s.sort_unstable();
        assert_eq!(s, (1..120).collect::<Vec<_>>());
    }

    #[test]
    fn engines_agree_on_small_polytopes() {
        let all: Vec<Color> = (1..16).collect();
        for (p, pal) in [
            (build_cube(3).unwrap(), &all[..7]),
            (build_cube(4).unwrap(), &all[..]),
            (build_dodecahedron().unwrap(), &all[..7]),
        ] {
            let t = SearchTask::new(&p, pal);
            let a = color_recursion(&t).unwrap();
            let b = block_pasting(&t).unwrap();
            assert_eq!(a, b, "{}", p.name());
        }
    }

    #[test]
    fn five_coloring_pasting() {
        let p = build_120cell().unwrap();
        let t = SearchTask::new(&p, &palette_with(4, &[15]));
        let a = block_pasting(&t).unwrap();
        assert_eq!(a.len(), 10);
        assert_eq!(a, color_recursion(&t).unwrap());
        for th in [100, 1000] {
            assert_eq!(block_pasting(&t.clone().with_threshold(th)).unwrap(), a);
        }
        for sel in [TransferSelection::LexMax, TransferSelection::Stride(7)] {
            assert_eq!(block_pasting(&t.clone().with_transfer(sel)).unwrap(), a);
        }
    }

    #[test]
    fn fixing_subset() {
        let p = build_120cell().unwrap();
        let t = SearchTask::new(&p, &palette_with(4, &[15]));
        let b1 = unfix_set(&t).unwrap();
        let fx = fixing_set(&b1, 4);
        assert!(!fx.is_empty() && fx.len() < b1.len());
        assert!(fx.iter().all(|r| b1.rows.binary_search(r).is_ok()));
    }
}
