//! Pass/fail matrix over the reproducible counts, and audits of result files.

use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context as _, Result};
use smallcover::classify::group_classes;
use smallcover::coloring::{
    added_color_representatives, is_nonsingular, is_orientable, palette_with, published_vector, published_vectors,
    z25_extension, CharacteristicMatrix, Color,
};
use smallcover::polytopes::{build_120cell, build_cube, build_dodecahedron, build_lobell, Polytope};
use smallcover::search::{enumerate, Engine, SearchTask};
use smallcover::symmetries::{graph_automorphisms, symmetry_group, vertex_stabilizer, Orientation};
use smallcover::topology::{betti_table, h_vector, Field};
use smallcover::Execution;

use crate::artifacts::{meta_path, read_vectors, resolve_polytope, sha256_hex, Meta};
use crate::commands::Context;
use crate::{Tier, VerifyArgs};

type Check = fn(&Context) -> Result<String>;

const QUICK: &[(u32, &str, Check)] = &[
    (1, "120-cell construction", c1_construction),
    (2, "symmetry group", c2_symmetries),
    (3, "added-color representatives", c3_representatives),
    (4, "5-coloring enumeration", c4_five_colorings),
    (5, "4-, 6-, 7-colorings are empty", c5_empty_sets),
    (6, "cube counts and classes", c6_cubes),
    (7, "homology of small covers and double covers", c7_topology),
    (8, "published vectors", c8_published),
];

const FULL: &[(u32, &str, Check)] = &[
    (9, "cube 5 and Löbell counts", c9_heavy_counts),
    (10, "8-coloring enumeration", c10_eight_colorings),
    (11, "8-coloring classification", c11_classes),
];

pub fn run(a: &VerifyArgs, ctx: &Context) -> Result<bool> {
    if let Some(dir) = &a.results {
        return audit_dir(dir);
    }
    let mut checks: Vec<&(u32, &str, Check)> = QUICK.iter().collect();
    if a.tier == Tier::Full {
        checks.extend(FULL.iter());
    }
    let mut first_failure = None;
    for (id, name, check) in checks {
        let started = Instant::now();
        let outcome = check(ctx);
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} ({secs:.1}s)"),
            Err(e) => {
                println!("FAIL {id:>2} {name}: {e:#} ({secs:.1}s)");
                first_failure.get_or_insert(format!("{id} {name}"));
            }
        }
    }
    match first_failure {
        Some(f) => {
            println!("first failing criterion: {f}");
            Ok(false)
        }
        None => Ok(true),
    }
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<()> {
    if got != want {
        bail!("{what}: got {got:?}, expected {want:?}");
    }
    Ok(())
}

fn c1_construction(_: &Context) -> Result<String> {
    let p = build_120cell()?;
    expect("facets", p.facet_count(), 120)?;
    expect("degrees", (0..120).all(|i| p.degree(i) == 12), true)?;
    expect("cliques", p.f_vector()[1..].to_vec(), vec![720, 1200, 600])?;
    expect("first four adjacent", p.cliques(4).contains(&vec![0, 1, 2, 3]), true)?;
    let layers = p.layers(0)?;
    expect("layer sizes", layers.iter().map(Vec::len).collect(), vec![1, 12, 20, 12, 30, 12, 20, 12, 1])?;
    let centers = p.centers().context("120-cell has centers")?;
    let orders = layers
        .iter()
        .map(|l| centers[l[0]].multiplicative_order())
        .collect::<smallcover::Result<Vec<_>>>()?;
    expect("center orders", orders, vec![1, 10, 6, 5, 4, 10, 3, 5, 2])?;
    Ok("120 facets, 720/1200/600 cliques, 9 layers".into())
}

fn c2_symmetries(_: &Context) -> Result<String> {
    let p = build_120cell()?;
    let g = symmetry_group(&p)?;
    expect("order", g.len(), 14400)?;
    expect("preserving", g.count_by_orientation(Orientation::Preserving), 7200)?;
    expect("reversing", g.count_by_orientation(Orientation::Reversing), 7200)?;
    let stab = vertex_stabilizer(&p, &g, &[0, 1, 2, 3])?;
    expect("stabilizer", stab.len(), 24)?;
    let mut actions: Vec<Vec<usize>> = stab.iter().map(|a| (0..4).map(|i| a.image(i)).collect()).collect();
    actions.sort();
    actions.dedup();
    expect("stabilizer action", actions.len(), 24)?;
    expect("dodecahedron automorphisms", graph_automorphisms(&build_dodecahedron()?).len(), 120)?;
    Ok("14400 = 7200 + 7200, stabilizer S4, dodecahedron 120".into())
}

fn c3_representatives(_: &Context) -> Result<String> {
    let counts: Vec<usize> = (5..=15).map(|k| added_color_representatives(k).len()).collect();
    expect("counts", counts, vec![3, 7, 16, 28, 35, 35, 28, 16, 7, 3, 1])?;
    expect("k = 5", added_color_representatives(5), vec![vec![3], vec![7], vec![15]])?;
    Ok("3,7,16,28,35,35,28,16,7,3,1".into())
}

fn c4_five_colorings(ctx: &Context) -> Result<String> {
    let p = build_120cell()?;
    let task = SearchTask::new(&p, &palette_with(4, &[15])).exact().with_execution(ctx.exec);
    let a = enumerate(&task, Engine::Recursion)?;
    let b = enumerate(&task, Engine::BlockPaste)?;
    expect("recursion count", a.len(), 10)?;
    expect("engines agree", a == b, true)?;
    expect("contains the published vector", a.contains(&published_vector(59)), true)?;
    let classes = group_classes(&a, &symmetry_group(&p)?, 4, ctx.exec)?;
    expect("classes", classes.len(), 1)?;
    expect("non-orientable", classes[0].orientable, false)?;
    Ok("10 vectors, 1 non-orientable class".into())
}

fn c5_empty_sets(ctx: &Context) -> Result<String> {
    let p = build_120cell()?;
    let mut sets: Vec<Vec<Color>> = vec![Vec::new()];
    sets.extend(added_color_representatives(6));
    sets.extend(added_color_representatives(7));
    for added in &sets {
        let task = SearchTask::new(&p, &palette_with(4, added)).exact().with_execution(ctx.exec);
        let n = enumerate(&task, Engine::Recursion)?.len();
        expect(&format!("set {added:?}"), n, 0)?;
    }
    Ok(format!("{} sets, all empty", sets.len()))
}

fn c6_cubes(ctx: &Context) -> Result<String> {
    for (n, count, classes) in [(2, 3, 2), (3, 25, 5), (4, 543, 19)] {
        let c = build_cube(n)?;
        let all: Vec<Color> = (1..1u8 << n).collect();
        let vs = enumerate(&SearchTask::new(&c, &all).with_execution(ctx.exec), Engine::Recursion)?;
        expect(&format!("cube {n} count"), vs.len(), count)?;
        let k = group_classes(&vs, &symmetry_group(&c)?, n, ctx.exec)?.len();
        expect(&format!("cube {n} classes"), k, classes)?;
    }
    Ok("3/25/543 vectors, 2/5/19 classes".into())
}

fn c7_topology(ctx: &Context) -> Result<String> {
    let p = build_120cell()?;
    expect("h-vector", h_vector(&p), vec![1, 116, 366, 116, 1])?;
    let m1 = betti_table(&p, &CharacteristicMatrix::from_coloring(&published_vector(1), 4), Field::Rationals, ctx.exec);
    expect("β of M1", m1.betti, vec![1, 0, 134, 0, 1])?;
    let d59 = betti_table(&p, &z25_extension(&published_vector(59))?, Field::Rationals, ctx.exec);
    expect("β of the δ59 double cover", d59.betti, vec![1, 115, 500, 115, 1])?;
    Ok("h = (1,116,366,116,1), M1 β2 = 134, δ59 β = (1,115,500,115,1)".into())
}

fn c8_published(_: &Context) -> Result<String> {
    let p = build_120cell()?;
    let vs = published_vectors();
    expect("rows", vs.len(), 60)?;
    for (k, v) in vs.iter().enumerate() {
        expect(&format!("row {} non-singular", k + 1), is_nonsingular(&p, v), true)?;
        expect(&format!("row {} orientability", k + 1), is_orientable(v, 4), k < 56)?;
    }
    Ok("60 rows non-singular, 56 orientable".into())
}

fn c9_heavy_counts(ctx: &Context) -> Result<String> {
    let c5 = build_cube(5)?;
    let all5: Vec<Color> = (1..32).collect();
    expect("cube 5", enumerate(&SearchTask::new(&c5, &all5).with_execution(ctx.exec), Engine::Recursion)?.len(), 29281)?;
    for (n, want) in [(5, 2165), (6, 18073), (7, 97454)] {
        let l = build_lobell(n)?;
        let got = enumerate(&SearchTask::new(&l, &(1..8).collect::<Vec<_>>()).with_execution(ctx.exec), Engine::Recursion)?.len();
        expect(&format!("Löbell {n}"), got, want)?;
    }
    Ok("29281; 2165/18073/97454".into())
}

/// Added colors, count and vectors of one 8-coloring set.
type SetResult = (Vec<Color>, usize, Vec<smallcover::coloring::ColoringVector>);

fn eight_coloring_sets(p: &Polytope, exec: Execution) -> Result<Vec<SetResult>> {
    let mut out = Vec::new();
    for added in added_color_representatives(8) {
        let task = SearchTask::new(p, &palette_with(4, &added)).exact().with_execution(exec);
        let vs = enumerate(&task, Engine::BlockPaste)?;
        out.push((added, vs.len(), vs));
    }
    Ok(out)
}

fn c10_eight_colorings(ctx: &Context) -> Result<String> {
    let p = build_120cell()?;
    let sets = eight_coloring_sets(&p, ctx.exec)?;
    let count = |a: &[Color]| sets.iter().find(|s| s.0 == a).map_or(0, |s| s.1);
    expect("(7,11,13,14)", count(&[7, 11, 13, 14]), 61440)?;
    expect("(3,5,9,14) + (3,5,9,15)", count(&[3, 5, 9, 14]) + count(&[3, 5, 9, 15]), 80)?;
    let others: Vec<_> = sets
        .iter()
        .filter(|s| ![&[7, 11, 13, 14][..], &[3, 5, 9, 14], &[3, 5, 9, 15]].contains(&s.0.as_slice()) && s.1 > 0)
        .map(|s| (s.0.clone(), s.1))
        .collect();
    expect("other nonempty sets", others, Vec::new())?;
    Ok("61440; 80; others empty".into())
}

fn c11_classes(ctx: &Context) -> Result<String> {
    let p = build_120cell()?;
    let g = symmetry_group(&p)?;
    let sets = eight_coloring_sets(&p, ctx.exec)?;
    let ori: Vec<_> = sets.iter().filter(|s| s.0 == [7, 11, 13, 14]).flat_map(|s| s.2.clone()).collect();
    let non: Vec<_> = sets.iter().filter(|s| s.0 != [7, 11, 13, 14]).flat_map(|s| s.2.clone()).collect();
    expect("orientable classes", group_classes(&ori, &g, 4, ctx.exec)?.len(), 56)?;
    expect("non-orientable classes", group_classes(&non, &g, 4, ctx.exec)?.len(), 2)?;
    Ok("56 orientable, 2 non-orientable".into())
}

/// Checks every `*.txt` with a sidecar: digest, count, decoding, non-singularity, palette.
fn audit_dir(dir: &Path) -> Result<bool> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt") && meta_path(p).exists())
        .collect();
    files.sort();
    let mut first_failure = None;
    for file in &files {
        match audit_file(file) {
            Ok(n) => println!("PASS {}: {n} vectors", file.display()),
            Err(e) => {
                println!("FAIL {}: {e:#}", file.display());
                first_failure.get_or_insert_with(|| file.display().to_string());
            }
        }
    }
    if let Some(f) = &first_failure {
        println!("first failing file: {f}");
    }
    Ok(first_failure.is_none())
}

fn audit_file(file: &Path) -> Result<usize> {
    let meta = Meta::parse(&fs::read_to_string(meta_path(file))?)?;
    let field = |k: &str| meta.get(k).with_context(|| format!("metadata lacks {k}"));
    let text = fs::read(file)?;
    expect("result digest", sha256_hex(&text), field("result_sha256")?.to_string())?;
    let p = resolve_polytope(field("polytope")?)?;
    expect("polytope digest", crate::artifacts::polytope_digest(&p), field("polytope_sha256")?.to_string())?;
    let vectors = read_vectors(file, &p)?;
    expect("count", vectors.len().to_string(), field("count")?.to_string())?;
    let palette: Vec<Color> = field("palette")?.split(',').map(str::parse).collect::<std::result::Result<_, _>>()?;
    let pmask = palette.iter().fold(0u64, |m, &c| m | 1 << c);
    let exact = field("exact")? == "true";
    for (k, v) in vectors.iter().enumerate() {
        if !is_nonsingular(&p, v) {
            bail!("line {} is singular", k + 1);
        }
        let used = v.colors().iter().fold(0u64, |m, &c| m | 1 << c);
        if used & !pmask != 0 || (exact && used != pmask) {
            bail!("line {} does not match the palette", k + 1);
        }
    }
    Ok(vectors.len())
}
