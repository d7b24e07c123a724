use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context as _, Result};
use smallcover::classify::{class_assignment, group_classes};
use smallcover::coloring::{
    encode_hex, is_nonsingular, is_orientable, palette_with, z25_extension, CharacteristicMatrix, Color, ColoringVector,
};
use smallcover::polytopes::{mask_to_vec, Polytope};
use smallcover::search::{enumerate, Engine, SearchTask};
use smallcover::symmetries::{symmetry_group, Orientation, SymmetryGroup, TransferSelection};
use smallcover::topology::{
    euler_characteristic, full_subcomplex, intersection_form_report, mod2_betti_from_hvector, row_space_breakdown,
    Field, BettiTable,
};
use smallcover::Execution;

use crate::artifacts::{meta_path, polytope_digest, read_vectors, resolve_polytope, write_vectors, Meta};
use crate::{BuildArgs, ClassifyArgs, Command, EngineChoice, EnumerateArgs, TopologyArgs};

pub struct Context {
    pub exec: Execution,
    pub workers: usize,
    pub verbose: bool,
}

/// `Ok(false)` means an integrity check failed.
pub fn run(cmd: &Command, ctx: &Context) -> Result<bool> {
    match cmd {
        Command::Build(a) => build(a),
        Command::Enumerate(a) => enumerate_cmd(a, ctx),
        Command::Classify(a) => classify(a, ctx),
        Command::Topology(a) => topology(a, ctx),
        Command::Verify(a) => crate::verify::run(a, ctx),
    }
}

fn build(a: &BuildArgs) -> Result<bool> {
    let p = resolve_polytope(&a.selector)?;
    print!("{}", summary(&p));
    if let Some(out) = &a.out {
        p.save(out).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(p.is_flag_consistent())
}

pub fn summary(p: &Polytope) -> String {
    let mut s = String::new();
    let degrees: std::collections::BTreeSet<usize> = (0..p.facet_count()).map(|i| p.degree(i)).collect();
    let _ = writeln!(s, "polytope {}", p.name());
    let _ = writeln!(s, "dimension {}", p.dimension());
    let _ = writeln!(s, "facets {}", p.facet_count());
    let _ = writeln!(s, "degrees {}", join(degrees.iter()));
    let _ = writeln!(s, "cliques {}", join(p.f_vector().iter().skip(1)));
    let _ = writeln!(s, "vertices {}", p.vertices().len());
    if p.centers().is_some() {
        if let Ok(layers) = p.layers(0) {
            let _ = writeln!(s, "layers {}", join(layers.iter().map(Vec::len)));
        }
    }
    let _ = writeln!(s, "digest {}", polytope_digest(p));
    s
}

fn join<T: ToString>(it: impl Iterator<Item = T>) -> String {
    it.map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// The palette, exactness flag and file stem of a `--set` spec.
pub fn parse_set(spec: &str, n: usize) -> Result<(Vec<Color>, bool, String)> {
    match spec {
        "all" => Ok(((1..1u16 << n).map(|c| c as Color).collect(), false, "all".into())),
        "none" => Ok((palette_with(n, &[]), true, "none".into())),
        _ => {
            let mut added = spec
                .split(',')
                .map(|t| t.trim().parse::<Color>().with_context(|| format!("bad color {t:?} in --set")))
                .collect::<Result<Vec<_>>>()?;
            added.sort_unstable();
            added.dedup();
            if let Some(c) = added.iter().find(|&&c| c == 0 || (c as usize) >= 1 << n || c.is_power_of_two()) {
                bail!("added color {c} must be a non-basis element of Z2^{n}");
            }
            let stem = join(added.iter()).replace(',', "-");
            Ok((palette_with(n, &added), true, stem))
        }
    }
}

pub fn parse_transfer(spec: &str) -> Result<TransferSelection> {
    match spec {
        "lexmin" => Ok(TransferSelection::LexMin),
        "lexmax" => Ok(TransferSelection::LexMax),
        _ => match spec.strip_prefix("stride:").map(str::parse::<usize>) {
            Some(Ok(k)) if k > 0 => Ok(TransferSelection::Stride(k)),
            _ => bail!("transfer must be lexmin, lexmax or stride:K"),
        },
    }
}

fn transfer_name(t: TransferSelection) -> String {
    match t {
        TransferSelection::LexMin => "lexmin".into(),
        TransferSelection::LexMax => "lexmax".into(),
        TransferSelection::Stride(k) => format!("stride:{k}"),
    }
}

fn enumerate_cmd(a: &EnumerateArgs, ctx: &Context) -> Result<bool> {
    let p = resolve_polytope(&a.polytope)?;
    let (palette, exact, mut stem) = parse_set(&a.set, p.dimension())?;
    if !p.name().starts_with("120") {
        stem = format!("{}_{stem}", p.name());
    }
    let transfer = parse_transfer(&a.transfer)?;
    let mut task = SearchTask::new(&p, &palette)
        .with_threshold(a.threshold)
        .with_transfer(transfer)
        .with_execution(ctx.exec);
    if exact {
        task = task.exact();
    }
    let engines: Vec<(Engine, &str)> = match a.engine {
        EngineChoice::Recursion => vec![(Engine::Recursion, "recursion")],
        EngineChoice::Blockpaste => vec![(Engine::BlockPaste, "blockpaste")],
        EngineChoice::Both => vec![(Engine::Recursion, "recursion"), (Engine::BlockPaste, "blockpaste")],
    };
    let mut prefix_note = String::new();
    if let (Some(src), Some(keep)) = (&a.prefix_from, a.fix) {
        let vs = read_vectors(src, &p)?;
        let v = vs.get(a.line.saturating_sub(1)).with_context(|| format!("{} has no line {}", src.display(), a.line))?;
        if keep > p.facet_count() {
            bail!("--fix {keep} exceeds the facet count");
        }
        task = task.with_fixed((0..keep).map(|f| (f, v.color(f))).collect());
        stem = format!("{stem}_prefix{keep}");
        prefix_note = format!("{}#{}:{keep}", src.display(), a.line);
    }
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let mut outputs: Vec<Vec<ColoringVector>> = Vec::new();
    for &(engine, name) in &engines {
        let started = Instant::now();
        let vectors = enumerate(&task, engine)?;
        let elapsed = started.elapsed();
        let file = if engines.len() > 1 { format!("{stem}.{name}.txt") } else { format!("{stem}.txt") };
        let path = a.out_dir.join(file);
        let digest = write_vectors(&path, &vectors)?;
        let mut meta = Meta::default();
        meta.set("command", "enumerate");
        meta.set("polytope", &a.polytope);
        meta.set("polytope_sha256", polytope_digest(&p));
        meta.set("palette", join(palette.iter()));
        meta.set("exact", exact);
        meta.set("engine", name);
        meta.set("split_threshold", a.threshold);
        meta.set("transfer", transfer_name(transfer));
        meta.set("prefix", &prefix_note);
        meta.set("workers", ctx.workers);
        meta.set("count", vectors.len());
        meta.set("result_sha256", digest);
        meta.set("wall_seconds", format!("{:.3}", elapsed.as_secs_f64()));
        fs::write(meta_path(&path), meta.render())?;
        println!("{} {} vectors ({name}, {:.2?})", path.display(), vectors.len(), elapsed);
        outputs.push(vectors);
    }
    let agree = outputs.windows(2).all(|w| w[0] == w[1]);
    if !agree {
        eprintln!("integrity: engines disagree");
    }
    let sound = outputs.iter().flatten().all(|v| is_nonsingular(&p, v));
    if !sound {
        eprintln!("integrity: singular vector in output");
    }
    Ok(agree && sound)
}

fn group_for(p: &Polytope, rotations_only: bool) -> Result<SymmetryGroup> {
    let g = symmetry_group(p)?;
    if !rotations_only {
        return Ok(g);
    }
    let rot: Vec<_> = g.elements().iter().filter(|e| e.orientation() == Orientation::Preserving).cloned().collect();
    if rot.is_empty() {
        bail!("symmetries of {} carry no orientation data", p.name());
    }
    Ok(SymmetryGroup::from_elements(rot))
}

fn classify(a: &ClassifyArgs, ctx: &Context) -> Result<bool> {
    let p = resolve_polytope(&a.polytope)?;
    let n = p.dimension();
    let mut vectors = Vec::new();
    for input in &a.inputs {
        vectors.extend(read_vectors(input, &p)?);
    }
    let g = group_for(&p, a.rotations_only)?;
    let started = Instant::now();
    let classes = group_classes(&vectors, &g, n, ctx.exec)?;
    let mut report = String::new();
    let _ = writeln!(report, "polytope {}", p.name());
    let _ = writeln!(report, "group {}", g.len());
    let _ = writeln!(report, "inputs {}", vectors.len());
    let _ = writeln!(report, "classes {}", classes.len());
    for (k, c) in classes.iter().enumerate() {
        let _ = writeln!(
            report,
            "class {} size {} orientable {} canonical {}",
            k + 1,
            c.members.len(),
            if c.orientable { "yes" } else { "no" },
            encode_hex(&c.canonical)
        );
    }
    emit(a.out.as_deref(), &report)?;
    if let Some(map) = &a.map {
        let text: String = class_assignment(&classes, vectors.len())
            .iter()
            .enumerate()
            .map(|(i, k)| format!("{} {}\n", i + 1, k + 1))
            .collect();
        fs::write(map, text)?;
    }
    if ctx.verbose {
        eprintln!("classified {} vectors in {:.2?}", vectors.len(), started.elapsed());
    }
    Ok(true)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn topology(a: &TopologyArgs, ctx: &Context) -> Result<bool> {
    let p = resolve_polytope(&a.polytope)?;
    let n = p.dimension();
    let vectors = read_vectors(&a.input, &p)?;
    let mut report = String::new();
    let mut ok = true;
    for (k, v) in vectors.iter().enumerate() {
        let orientable = is_orientable(v, n);
        let _ = writeln!(report, "vector {}", k + 1);
        let _ = writeln!(report, "  coloring {}", encode_hex(v));
        let _ = writeln!(report, "  orientable {}", if orientable { "yes" } else { "no" });
        let lambda = if a.double_cover {
            if orientable {
                let _ = writeln!(report, "  double cover: input is orientable, skipped");
                continue;
            }
            let d = z25_extension(v)?;
            let _ = writeln!(report, "  double cover {}", encode_hex(&ColoringVector::new(d.columns().to_vec())?));
            d
        } else {
            CharacteristicMatrix::from_coloring(v, n)
        };
        let breakdown = row_space_breakdown(&p, &lambda, Field::Rationals, ctx.exec);
        let mut betti = vec![0usize; n + 1];
        for (_, red) in &breakdown {
            for (i, b) in betti.iter_mut().enumerate() {
                *b += red[i];
            }
        }
        let table = BettiTable {
            field: Field::Rationals,
            betti,
        };
        let chi = euler_characteristic(&table);
        let _ = writeln!(report, "  rational betti {}", join(table.betti.iter()));
        let _ = writeln!(report, "  euler characteristic {chi}");
        if a.mod2 && !a.double_cover {
            let m2 = mod2_betti_from_hvector(&p);
            let _ = writeln!(report, "  mod2 betti {}", join(m2.betti.iter()));
            if euler_characteristic(&m2) != chi {
                let _ = writeln!(report, "  integrity: rational and mod-2 Euler characteristics differ");
                ok = false;
            }
        }
        if orientable || a.double_cover {
            if table.betti.len() > 3 && table.betti[1] != table.betti[n - 1] {
                let _ = writeln!(report, "  integrity: Poincaré duality fails");
                ok = false;
            }
            if n == 4 {
                match intersection_form_report(&p, &lambda) {
                    Ok(form) => {
                        let _ = writeln!(report, "  intersection form {form}");
                    }
                    Err(e) => {
                        let _ = writeln!(report, "  integrity: {e}");
                        ok = false;
                    }
                }
            }
        }
        let _ = writeln!(report, "  torsion not computed");
        if ctx.verbose {
            for (e, red) in breakdown.iter().filter(|(_, r)| r.iter().any(|&x| x > 0)) {
                let comps = full_subcomplex(&p, e.omega).components();
                let comps: Vec<String> = comps
                    .iter()
                    .map(|c| format!("{{{}}}", join(c.iter().map(|f| f + 1))))
                    .collect();
                let _ = writeln!(
                    report,
                    "  omega rows {:#b} facets {} reduced {} components {}",
                    e.combination,
                    join(mask_to_vec(e.omega).iter().map(|f| f + 1)),
                    join(red.iter()),
                    comps.join(" ")
                );
            }
        }
    }
    emit(a.out.as_deref(), &report)?;
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_specs() {
        let (pal, exact, stem) = parse_set("14,7,11,13", 4).unwrap();
        assert_eq!(pal, vec![1, 2, 4, 7, 8, 11, 13, 14]);
        assert!(exact);
        assert_eq!(stem, "7-11-13-14");
        assert_eq!(parse_set("all", 3).unwrap().0.len(), 7);
        assert!(parse_set("4", 4).is_err());
        assert!(parse_set("16", 4).is_err());
        assert!(parse_set("x", 4).is_err());
    }

    #[test]
    fn transfer_specs() {
        assert_eq!(parse_transfer("stride:7").unwrap(), TransferSelection::Stride(7));
        assert!(parse_transfer("stride:0").is_err());
        assert!(parse_transfer("first").is_err());
    }
}
