//! DJ-equivalence of colorings: `λ ~ μ` iff `λ = g∘μ∘a` for a polytope
//! symmetry `a` and a linear recoloring `g`.
//!
//! Classes are keyed by a canonical form, the lexicographic minimum of the
//! GL-normalized symmetry orbit.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::coloring::{apply_linear, coordinate_table, general_linear_group, is_orientable, Color, ColoringVector};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::symmetries::{FacetPermutation, SymmetryGroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClass {
    pub canonical: ColoringVector,
    /// Sorted, duplicate-free.
    pub members: Vec<ColoringVector>,
    /// Positions in the classified input.
    pub input_indices: Vec<usize>,
    pub orientable: bool,
}

/// `output[i] = v[a(i)]`.
pub fn recolor_by_symmetry(v: &ColoringVector, a: &FacetPermutation) -> ColoringVector {
    ColoringVector::new((0..v.len()).map(|i| v.color(a.image(i))).collect()).expect("recoloring keeps colors nonzero")
}

fn normalized_image(v: &ColoringVector, a: &FacetPermutation, n: usize) -> Option<Vec<Color>> {
    let basis: Vec<Color> = (0..n).map(|i| v.color(a.image(i))).collect();
    let table = coordinate_table(&basis)?;
    Some((0..v.len()).map(|i| table[v.color(a.image(i)) as usize]).collect())
}

/// Minimum over the group of the normalized recolorings.
pub fn canonical_form(v: &ColoringVector, g: &SymmetryGroup, n: usize) -> Result<ColoringVector> {
    let m = v.len();
    let mut best: Option<Vec<Color>> = None;
    for a in g.elements() {
        let basis: Vec<Color> = (0..n).map(|i| v.color(a.image(i))).collect();
        let table = coordinate_table(&basis)
            .ok_or_else(|| Error::InvalidColoring("a vertex does not carry a basis".into()))?;
        match &mut best {
            None => best = Some((0..m).map(|i| table[v.color(a.image(i)) as usize]).collect()),
            Some(b) => {
                // lexicographic comparison that stops at the first difference
                for i in 0..m {
                    let c = table[v.color(a.image(i)) as usize];
                    if c < b[i] {
                        for (j, slot) in b.iter_mut().enumerate().skip(i) {
                            *slot = table[v.color(a.image(j)) as usize];
                        }
                        break;
                    }
                    if c > b[i] {
                        break;
                    }
                }
            }
        }
    }
    let best = best.ok_or_else(|| Error::InvalidColoring("empty symmetry group".into()))?;
    Ok(ColoringVector::new(best).expect("normalized colors are nonzero"))
}

pub fn dj_equivalent(v1: &ColoringVector, v2: &ColoringVector, g: &SymmetryGroup, n: usize) -> Result<bool> {
    Ok(canonical_form(v1, g, n)? == canonical_form(v2, g, n)?)
}

/// Independent check: the raw symmetry orbit of `v1` meets the GL orbit of `v2`.
pub fn dj_equivalent_by_orbits(v1: &ColoringVector, v2: &ColoringVector, g: &SymmetryGroup, n: usize) -> bool {
    let left: HashSet<ColoringVector> = g.elements().iter().map(|a| recolor_by_symmetry(v1, a)).collect();
    general_linear_group(n).iter().any(|m| left.contains(&apply_linear(m, v2)))
}

/// Set of normalized images of `v` over the whole group.
pub fn normalized_orbit(v: &ColoringVector, g: &SymmetryGroup, n: usize) -> Result<HashSet<Vec<Color>>> {
    g.elements()
        .iter()
        .map(|a| normalized_image(v, a, n).ok_or_else(|| Error::InvalidColoring("a vertex does not carry a basis".into())))
        .collect()
}

/// Sorted color-frequency profile; constant on DJ classes.
pub fn histogram_key(v: &ColoringVector) -> Vec<usize> {
    let mut counts: HashMap<Color, usize> = HashMap::new();
    for &c in v.colors() {
        *counts.entry(c).or_default() += 1;
    }
    let mut key: Vec<usize> = counts.into_values().collect();
    key.sort_unstable();
    key
}

/// Partitions `vectors` into DJ classes, sorted by canonical form.
pub fn group_classes(vectors: &[ColoringVector], g: &SymmetryGroup, n: usize, exec: Execution) -> Result<Vec<EquivalenceClass>> {
    let mut buckets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, v) in vectors.iter().enumerate() {
        buckets.entry(histogram_key(v)).or_default().push(i);
    }
    let buckets: Vec<Vec<usize>> = buckets.into_values().collect();
    let parts = par::map(exec, &buckets, |idx| classify_bucket(vectors, idx, g, n));
    let mut classes = Vec::new();
    for part in parts {
        classes.extend(part?);
    }
    classes.sort_by(|a, b| a.canonical.cmp(&b.canonical));
    Ok(classes)
}

fn classify_bucket(vectors: &[ColoringVector], idx: &[usize], g: &SymmetryGroup, n: usize) -> Result<Vec<EquivalenceClass>> {
    let mut by_colors: HashMap<&[Color], Vec<usize>> = HashMap::new();
    for &i in idx {
        by_colors.entry(vectors[i].colors()).or_default().push(i);
    }
    let mut assigned: HashSet<usize> = HashSet::new();
    let mut out = Vec::new();
    for &i in idx {
        if assigned.contains(&i) {
            continue;
        }
        let orbit = normalized_orbit(&vectors[i], g, n)?;
        let canonical = ColoringVector::new(orbit.iter().min().unwrap().clone())?;
        let mut input_indices = Vec::new();
        for w in &orbit {
            if let Some(hits) = by_colors.get(w.as_slice()) {
                input_indices.extend(hits.iter().copied());
            }
        }
        // unnormalized inputs are matched by their own normalization
        input_indices.push(i);
        input_indices.sort_unstable();
        input_indices.dedup();
        for &j in &input_indices {
            assigned.insert(j);
        }
        let mut members: Vec<ColoringVector> = input_indices.iter().map(|&j| vectors[j].clone()).collect();
        members.sort();
        members.dedup();
        let orientable = is_orientable(&canonical, n);
        if members.iter().any(|w| is_orientable(w, n) != orientable) {
            return Err(Error::Integrity("orientability differs inside a class".into()));
        }
        out.push(EquivalenceClass {
            canonical,
            members,
            input_indices,
            orientable,
        });
    }
    Ok(out)
}

/// `result[i]` is the class index of input `i`.
pub fn class_assignment(classes: &[EquivalenceClass], input_len: usize) -> Vec<usize> {
    let mut out = vec![usize::MAX; input_len];
    for (k, c) in classes.iter().enumerate() {
        for &i in &c.input_indices {
            out[i] = k;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{gl_normalize, published_vector};
    use crate::polytopes::build_cube;
    use crate::search::{color_recursion, SearchTask};
    use crate::symmetries::cube_symmetries;

    #[test]
    fn cube_class_counts() {
        for (n, want) in [(2, 2), (3, 5), (4, 19)] {
            let c = build_cube(n).unwrap();
            let all: Vec<Color> = (1..1u8 << n).collect();
            let vs = color_recursion(&SearchTask::new(&c, &all)).unwrap();
            let g = cube_symmetries(n);
            let classes = group_classes(&vs, &g, n, Execution::default()).unwrap();
            assert_eq!(classes.len(), want, "cube {n}");
            let total: usize = classes.iter().map(|c| c.members.len()).sum();
            assert_eq!(total, vs.len());
            for cl in &classes {
                for w in &cl.members {
                    assert_eq!(canonical_form(w, &g, n).unwrap(), cl.canonical);
                }
            }
        }
    }

    #[test]
    fn oracle_agrees_on_cube() {
        let c = build_cube(3).unwrap();
        let vs = color_recursion(&SearchTask::new(&c, &(1..8).collect::<Vec<_>>())).unwrap();
        let g = cube_symmetries(3);
        for a in vs.iter().step_by(3) {
            for b in vs.iter().step_by(4) {
                assert_eq!(dj_equivalent(a, b, &g, 3).unwrap(), dj_equivalent_by_orbits(a, b, &g, 3));
            }
        }
    }

    #[test]
    fn recolor_round_trip() {
        let g = cube_symmetries(3);
        let v = ColoringVector::new(vec![1, 2, 4, 1, 2, 4]).unwrap();
        for a in g.elements() {
            let w = recolor_by_symmetry(&v, a);
            assert_eq!(recolor_by_symmetry(&w, &a.inverse()), v);
        }
        let _ = gl_normalize(&published_vector(1), 4).unwrap();
    }
}
