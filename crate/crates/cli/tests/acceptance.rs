//! The ten acceptance criteria, one PASS/FAIL line each.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use common::{context, fixture, latticeforge, wordnet_dir};
use latticeforge::{
    aggregate, brute_force_concepts, build_lattice, enumerate_concepts, frequencies,
    frequency_reduce, lattice_stats, merge, read_cex, write_cex, Axis, FormalContext, Lemmatizer,
    Percent, Pos, RelatednessLexicon, WordNetDb,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, message: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message.into())
    }
}

fn random_context(
    rng: &mut ChaCha8Rng,
    max_objects: usize,
    max_attributes: usize,
) -> FormalContext {
    let n = rng.gen_range(0..=max_objects);
    let m = rng.gen_range(0..=max_attributes);
    let density = rng.gen_range(0.1..0.9);
    let table: Vec<Vec<bool>> = (0..n)
        .map(|_| (0..m).map(|_| rng.gen_bool(density)).collect())
        .collect();
    FormalContext::from_rows(
        (0..n).map(|i| format!("g{i}")),
        (0..m).map(|j| format!("m{j}")),
        &table,
    )
    .unwrap()
}

fn concept_set(
    ctx: &FormalContext,
    concepts: &[latticeforge::FormalConcept],
) -> BTreeSet<(Vec<String>, Vec<String>)> {
    concepts
        .iter()
        .map(|c| {
            let ext = c.extent_labels(ctx).labels().to_vec();
            let int = c.intent_labels(ctx).labels().to_vec();
            (ext, int)
        })
        .collect()
}

const PAPER_FIXTURES: [&str; 5] = [
    "table_2_5.csv",
    "table_2_6.csv",
    "table_3_2.csv",
    "table_3_8.csv",
    "table_4_6.csv",
];

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut contexts: Vec<FormalContext> =
        (0..250).map(|_| random_context(&mut rng, 8, 8)).collect();
    contexts.extend(PAPER_FIXTURES.iter().map(|f| context(f)));
    for (k, ctx) in contexts.iter().enumerate() {
        let fast = concept_set(ctx, &enumerate_concepts(ctx));
        let oracle = concept_set(ctx, &brute_force_concepts(ctx).map_err(|e| e.to_string())?);
        ensure(
            fast == oracle,
            format!("context #{k} differs from the oracle"),
        )?;
    }
    let elapsed = start.elapsed();
    ensure(
        elapsed < Duration::from_secs(10),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "{} contexts agree in {:.2?}",
        contexts.len(),
        elapsed
    ))
}

fn tourism() -> Check {
    let ctx = context("table_3_2.csv");
    let lattice = build_lattice(&ctx);
    ensure(lattice.len() == 9, format!("{} concepts", lattice.len()))?;
    let top_intent = lattice.intent_labels(lattice.top_index());
    ensure(top_intent == ["book"], format!("top intent {top_intent:?}"))?;
    let upper = lattice.upper_covers();
    let lower = lattice.lower_covers();
    let tops: Vec<usize> = (0..lattice.len())
        .filter(|&i| upper[i].is_empty())
        .collect();
    let bottoms: Vec<usize> = (0..lattice.len())
        .filter(|&i| lower[i].is_empty())
        .collect();
    ensure(
        tops.len() == 1 && bottoms.len() == 1,
        format!("tops {tops:?}, bottoms {bottoms:?}"),
    )?;
    Ok("9 concepts, top intent {book}, one top, one bottom".into())
}

fn merge_fidelity() -> Check {
    let merged = merge(&context("table_3_4.csv"), Axis::Object, &["A", "B"], "A,B")
        .map_err(|e| e.to_string())?;
    let expected = FormalContext::from_rows(
        ["A,B", "C", "D"],
        ["W", "X", "Y", "Z"],
        &[
            vec![true, false, true, true],
            vec![false, false, true, true],
            vec![false, true, true, false],
        ],
    )
    .unwrap();
    ensure(merged == expected, "Table 3.4 merge differs from Table 3.6")?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut samples = 0;
    while samples < 1000 {
        let ctx = random_context(&mut rng, 8, 8);
        if ctx.object_count() < 2 {
            continue;
        }
        let mut group: Vec<String> = ctx
            .objects()
            .iter()
            .filter(|_| rng.gen_bool(0.4))
            .cloned()
            .collect();
        if group.len() < 2 {
            group = ctx.objects()[..2].to_vec();
        }
        let merged = merge(&ctx, Axis::Object, &group, "merged").map_err(|e| e.to_string())?;
        for a in ctx.attributes() {
            // Truth table of OR: the merged row has the attribute iff some member has it.
            let any = group.iter().any(|g| ctx.has(g, a).unwrap());
            ensure(
                merged.has("merged", a).unwrap() == any,
                format!("sample {samples}: OR violated at {a}"),
            )?;
            for o in ctx.objects().iter().filter(|o| !group.contains(o)) {
                ensure(
                    merged.has(o, a).unwrap() == ctx.has(o, a).unwrap(),
                    "untouched row changed",
                )?;
            }
        }
        samples += 1;
    }
    Ok("Table 3.6 reproduced; OR semantics on 1000 random merges".into())
}

fn frequency_fidelity() -> Check {
    let ctx = context("table_3_8.csv");
    let f = frequencies(&ctx).map_err(|e| e.to_string())?;
    let pct = |v: &[u64]| {
        v.iter()
            .map(|&x| Percent::from_integer(x))
            .collect::<Vec<_>>()
    };
    ensure(
        f.objects == pct(&[75, 25, 50, 25, 50]),
        format!("object frequencies {:?}", f.objects),
    )?;
    ensure(
        f.attributes == pct(&[40, 20, 60, 60]),
        format!("attribute frequencies {:?}", f.attributes),
    )?;
    let (reduced, report) =
        frequency_reduce(&ctx, Percent::from_integer(20)).map_err(|e| e.to_string())?;
    let removed: Vec<&str> = report
        .removed_attributes
        .iter()
        .map(|r| r.label.as_str())
        .collect();
    ensure(
        removed == ["X"] && report.removed_objects.is_empty(),
        format!("removed {removed:?}"),
    )?;
    ensure(
        reduced.attributes() == ["W", "Y", "Z"] && reduced.object_count() == 5,
        "wrong reduced shape",
    )?;
    Ok("75/25/50/25/50 and 40/20/60/60 exact; 20% removes only X".into())
}

fn monotonicity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 600 {
        let ctx = random_context(&mut rng, 8, 8);
        if ctx.object_count() == 0 || ctx.attribute_count() == 0 {
            continue;
        }
        let t1 = rng.gen_range(0..=100u64);
        let t2 = rng.gen_range(t1..=100u64);
        let before = brute_force_concepts(&ctx).map_err(|e| e.to_string())?.len();
        let (low, low_report) =
            frequency_reduce(&ctx, Percent::from_integer(t1)).map_err(|e| e.to_string())?;
        let (_, high_report) =
            frequency_reduce(&ctx, Percent::from_integer(t2)).map_err(|e| e.to_string())?;
        let after = brute_force_concepts(&low).map_err(|e| e.to_string())?.len();
        ensure(
            after <= before,
            format!("concepts grew from {before} to {after} at {t1}%"),
        )?;
        let labels = |rs: &[latticeforge::Removal]| {
            rs.iter().map(|r| r.label.clone()).collect::<BTreeSet<_>>()
        };
        ensure(
            labels(&low_report.removed_objects).is_subset(&labels(&high_report.removed_objects))
                && labels(&low_report.removed_attributes)
                    .is_subset(&labels(&high_report.removed_attributes)),
            format!("removal not monotone between {t1}% and {t2}%"),
        )?;
        checked += 1;
    }
    Ok(format!("{checked} random contexts and threshold pairs"))
}

const SAMPLE_CEX: &str = r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?><ConceptualSystem><Version MajorNumber="1" MinorNumber="0"/>
<Contexts><Context Identifier="0" Type="Binary">
<Attributes>
<Attribute Frequency="1" Identifier="0"><Name Identifier="0">building</Name></Attribute>
<Attribute Frequency="0" Identifier="1"><Name Identifier="1">reference</Name></Attribute>
<Attribute Frequency="1" Identifier="2"><Name Identifier="2">allude</Name></Attribute>
</Attributes>
<Objects>
<Object Frequency="0"><Name>hold</Name><Intent/></Object>
<Object Frequency="1"><Name>combine</Name><Intent><HasAttribute AttributeIdentifier="0"/></Intent></Object>
<Object Frequency="1"><Name>reference</Name><Intent><HasAttribute AttributeIdentifier="2"/></Intent></Object>
</Objects>
</Context></Contexts><RecalculationPolicy Value="Clear"/><Lattices/></ConceptualSystem>
"#;

fn cex() -> Check {
    let doc = read_cex(SAMPLE_CEX.as_bytes()).map_err(|e| e.to_string())?;
    let ctx = &doc.context;
    ensure(
        (ctx.attribute_count(), ctx.object_count(), ctx.cell_count()) == (3, 3, 2),
        "sample is not 3/3/2",
    )?;
    ensure(
        doc.attribute_frequencies == [Some(1), Some(0), Some(1)],
        "attribute frequencies",
    )?;
    ensure(
        doc.object_frequencies == [Some(0), Some(1), Some(1)],
        "object frequencies",
    )?;
    ensure(
        doc.extended && doc.validate().is_ok(),
        "sample not extended or invalid",
    )?;
    let mut names: Vec<&str> = PAPER_FIXTURES.to_vec();
    names.push("table_3_4.csv");
    for name in names {
        let fixture = context(name);
        for extended in [false, true] {
            let written = write_cex(&fixture, extended);
            ensure(
                written == write_cex(&fixture, extended),
                format!("{name}: output not deterministic"),
            )?;
            let back = read_cex(written.as_bytes()).map_err(|e| format!("{name}: {e}"))?;
            ensure(
                back.context == fixture && back.extended == extended,
                format!("{name}: round trip differs"),
            )?;
            ensure(
                write_cex(&back.context, back.extended) == written,
                format!("{name}: rewrite differs"),
            )?;
        }
    }
    Ok("sample is 3/3/2 with printed frequencies; 6 fixtures round-trip byte-identically".into())
}

fn morphology() -> Check {
    let (dir, full) = wordnet_dir();
    let db = WordNetDb::load(&dir).map_err(|e| e.to_string())?;
    for (word, pos, lemma) in [
        ("drove", Pos::Verb, "drive"),
        ("walked", Pos::Verb, "walk"),
        ("cats", Pos::Noun, "cat"),
    ] {
        let got = db.lemmatize(word, pos);
        ensure(got.as_deref() == Some(lemma), format!("{word} -> {got:?}"))?;
    }
    let dog = db.most_general_within("dog", "canine", Pos::Noun, 1);
    ensure(
        dog.as_deref() == Some("canine"),
        format!("dog/canine -> {dog:?}"),
    )?;
    let cat = db.most_general_within("cat", "entity", Pos::Noun, 3);
    ensure(cat.is_none(), format!("cat/entity at depth 3 -> {cat:?}"))?;
    let source = if full {
        "full database"
    } else {
        "bundled subset"
    };
    Ok(format!(
        "drove/walked/cats, dog<canine, cat/entity (WordNet {source} at {})",
        dir.display()
    ))
}

fn aggregation() -> Check {
    let column = [
        47.0, 55.0, 21.0, 31.0, 40.0, 44.0, 51.0, 59.0, 48.0, 54.0, 58.0, 22.0, 50.0, 36.0, 24.0,
        33.0, 45.0, 49.0, 32.0, 65.0,
    ];
    let a = aggregate(&column).map_err(|e| e.to_string())?;
    ensure((a.mean - 43.2).abs() < 1e-9, format!("mean {}", a.mean))?;
    ensure(
        a.median == 46.0 && a.sum == 864.0 && a.max == 65.0 && a.min == 21.0,
        "median/sum/max/min",
    )?;
    ensure(
        (a.stdv_p - 12.51).abs() <= 0.01,
        format!("stdv_p {}", a.stdv_p),
    )?;
    Ok(format!(
        "mean 43.2, median 46, sum 864, max 65, min 21, stdv_p {:.4}",
        a.stdv_p
    ))
}

/// Largest antichain by branch and bound over the comparability relation.
fn brute_force_width(n: usize, comparable: &dyn Fn(usize, usize) -> bool) -> usize {
    fn go(
        k: usize,
        n: usize,
        chosen: &mut Vec<usize>,
        best: &mut usize,
        comparable: &dyn Fn(usize, usize) -> bool,
    ) {
        if chosen.len() + (n - k) <= *best {
            return;
        }
        if k == n {
            *best = chosen.len();
            return;
        }
        if chosen.iter().all(|&c| !comparable(c, k)) {
            chosen.push(k);
            go(k + 1, n, chosen, best, comparable);
            chosen.pop();
        }
        go(k + 1, n, chosen, best, comparable);
    }
    let mut best = 0;
    go(0, n, &mut Vec::new(), &mut best, comparable);
    best
}

fn trivial_stats() -> Check {
    let square = |f: &dyn Fn(usize, usize) -> bool| {
        let table: Vec<Vec<bool>> = (0..3).map(|i| (0..3).map(|j| f(i, j)).collect()).collect();
        FormalContext::from_rows(["a", "b", "c"], ["x", "y", "z"], &table).unwrap()
    };
    let empty = FormalContext::from_rows(["a", "b"], ["x", "y"], &[vec![false; 2], vec![false; 2]])
        .unwrap();
    let cases = [
        ("full 3x3", square(&|_, _| true), (1, 0, 0, (1, 1))),
        ("identity 3x3", square(&|i, j| i == j), (5, 6, 2, (3, 3))),
        ("empty 2x2", empty, (2, 1, 1, (1, 1))),
    ];
    for (name, ctx, expected) in cases {
        let s = lattice_stats(&build_lattice(&ctx));
        let got = (s.concept_count, s.edge_count, s.height, s.width);
        ensure(got == expected, format!("{name}: {got:?}"))?;
    }
    let mut names: Vec<&str> = PAPER_FIXTURES.to_vec();
    names.push("table_3_4.csv");
    let mut checked = 0;
    for name in names {
        let lattice = build_lattice(&context(name));
        let s = lattice_stats(&lattice);
        ensure(
            lattice.len() <= 512 && s.width_exact,
            format!("{name}: width not exact"),
        )?;
        let comparable = |a: usize, b: usize| lattice.less_than(a, b) || lattice.less_than(b, a);
        let width = brute_force_width(lattice.len(), &comparable);
        ensure(
            s.width.1 == width,
            format!("{name}: width {} vs brute force {width}", s.width.1),
        )?;
        checked += 1;
    }
    Ok(format!(
        "(1,0,0,[1,1]), (5,6,2,[3,3]), (2,1,1,[1,1]); exact width on {checked} fixture lattices"
    ))
}

const VERBS: [&str; 16] = [
    "house", "hold", "combine", "build", "open", "visit", "display", "collect", "buy", "sell",
    "drive", "ride", "rent", "book", "reserve", "travel",
];
const NOUNS: [&str; 28] = [
    "museum",
    "collection",
    "building",
    "art",
    "painting",
    "statue",
    "library",
    "book",
    "car",
    "automobile",
    "vehicle",
    "bike",
    "trip",
    "journey",
    "city",
    "town",
    "house",
    "apartment",
    "object",
    "artifact",
    "culture",
    "history",
    "visitor",
    "tourist",
    "dog",
    "canine",
    "cat",
    "animal",
];

/// A synthetic typed-dependency file with inflected forms and some
/// relations outside the whitelist.
fn synthetic_corpus(rng: &mut ChaCha8Rng) -> String {
    let mut out = String::new();
    for _ in 0..rng.gen_range(25..45) {
        let verb = VERBS[rng.gen_range(0..VERBS.len())];
        let verb = match rng.gen_range(0..3) {
            0 => verb.to_string(),
            1 => format!("{verb}s"),
            _ => format!("{}ed", verb.trim_end_matches('e')),
        };
        let subject = NOUNS[rng.gen_range(0..NOUNS.len())];
        let object = NOUNS[rng.gen_range(0..NOUNS.len())];
        let plural = if rng.gen_bool(0.3) { "s" } else { "" };
        out.push_str(&format!(
            "det({subject}-2, The-1)\nnsubj({verb}-3, {subject}-2)\n"
        ));
        out.push_str(&format!(
            "dobj({verb}-3, {object}{plural}-5)\namod({object}{plural}-5, old-4)\n\n"
        ));
    }
    out
}

fn end_to_end() -> Check {
    let (wn, _) = wordnet_dir();
    let work = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for k in 0..2 {
        let out_dir = work.path().join(format!("run{k}"));
        let status = latticeforge()
            .env("WNHOME", &wn)
            .args(["run", fixture("british_museum.tsv").to_str().unwrap()])
            .args([
                "--order",
                "wn-freq",
                "--depth",
                "4",
                "--threshold",
                "5",
                "--out",
            ])
            .arg(&out_dir)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(
            status.status.success(),
            String::from_utf8_lossy(&status.stderr).to_string(),
        )?;
        outputs.push(out_dir);
    }
    for name in ["context.cex", "reduced.cex", "lattice.dot", "stats.csv"] {
        let read = |dir: &Path| fs::read(dir.join(name)).map_err(|e| format!("{name}: {e}"));
        ensure(
            read(&outputs[0])? == read(&outputs[1])?,
            format!("{name} differs between runs"),
        )?;
    }

    let corpora = work.path().join("corpora");
    fs::create_dir(&corpora).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for k in 0..20 {
        fs::write(
            corpora.join(format!("text{k:02}.dep")),
            synthetic_corpus(&mut rng),
        )
        .map_err(|e| e.to_string())?;
    }
    let start = Instant::now();
    let out = latticeforge()
        .env("WNHOME", &wn)
        .arg("eval")
        .arg(&corpora)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(
        out.status.success(),
        String::from_utf8_lossy(&out.stderr).to_string(),
    )?;
    let csv = String::from_utf8_lossy(&out.stdout);
    let data_rows = csv.lines().filter(|l| l.starts_with("text")).count();
    ensure(data_rows == 100, format!("{data_rows} data rows"))?;
    ensure(
        elapsed < Duration::from_secs(60),
        format!("eval took {elapsed:?}"),
    )?;
    Ok(format!(
        "worked example byte-identical across runs; 20-corpus eval, 100 rows in {elapsed:.2?}"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("tourism lattice", tourism),
        ("merge fidelity", merge_fidelity),
        ("frequency fidelity", frequency_fidelity),
        ("monotonicity", monotonicity),
        ("CEX", cex),
        ("morphology", morphology),
        ("aggregation arithmetic", aggregation),
        ("trivial lattice stats", trivial_stats),
        ("end-to-end determinism", end_to_end),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
