//! Acceptance criteria 1-10, one line per criterion.

mod common;

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use levelnerve::complexes::{
    build_abelian_nerve, build_image_complex, cross_validate, framing_fiber, homology, pi1_report, Built, Verdict,
};
use levelnerve::covers::{derived_cover, Cover, CoverSpec};
use levelnerve::decomp::{seed, Decomposition};
use levelnerve::io::{encode, sha256_hex};
use levelnerve::limits::Limits;
use levelnerve::monodromy::{abelian_local_kernel, looijenga_local_kernel, smoothness_hypothesis};
use levelnerve::surface::graph::{enumerate_stable_graphs, max_edges, StableGraph};
use levelnerve::surface::standard_multicurve;

/// Clauses that cannot hold as stated; they must print FAIL.
const KNOWN_UNATTAINABLE: &[&str] = &["3b"];

struct Line {
    id: &'static str,
    pass: bool,
    detail: String,
}

/// Digests of every artifact a run produces, for the determinism check.
type Digests = BTreeMap<String, String>;

fn record(d: &mut Digests, name: &str, bytes: Vec<u8>) {
    d.insert(name.to_string(), sha256_hex(&bytes));
}

fn types_up_to(g: usize, n: usize, top_rank: usize) -> Vec<StableGraph> {
    let mut v = vec![StableGraph::trivial(g, n)];
    for k in 0..=top_rank.min(max_edges(g, n).saturating_sub(1)) {
        v.extend(enumerate_stable_graphs(g, n, k).unwrap());
    }
    v
}

fn nerve(g: usize, n: usize, m: i64, lim: &Limits) -> Built {
    build_abelian_nerve(g, n, m, lim).expect("nerve builds")
}

fn c1(lim: &Limits, d: &mut Digests) -> Line {
    let b = nerve(2, 0, 2, lim);
    let x = &b.complex;
    let (mut nonsep, mut sep) = (0, 0);
    for s in &x.ranks[0].simplices {
        let dec = Decomposition::from_canonical_form(s).unwrap();
        if dec.edges[0][0] == dec.edges[0][1] {
            nonsep += 1;
        } else {
            sep += 1;
        }
    }
    let rep = cross_validate(x, Some(&b)).unwrap();
    let bf = rep.brute_force.clone().unwrap_or_default();
    let bf_ok = !bf.is_empty() && bf.iter().all(|r| r.missing == 0 && r.extra == 0);
    record(d, "nerve_2_0_2", encode(x).unwrap());
    record(d, "cross_2_0_2", encode(&rep).unwrap());
    Line {
        id: "1",
        pass: nonsep == 15 && sep == 10 && rep.passed() && bf_ok,
        detail: format!(
            "rank-0: {nonsep} non-separating + {sep} separating; brute force per rank {:?}",
            bf.iter().map(|r| (r.distinct, r.brute_force)).collect::<Vec<_>>()
        ),
    }
}

fn c2(lim: &Limits, d: &mut Digests) -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for m in [2, 3] {
        let b = nerve(2, 0, m, lim);
        let p = pi1_report(&b.complex);
        let h0 = homology(&b.complex, 0).unwrap();
        ok &= p.verdict == Verdict::Trivial && h0.free_rank == 1 && h0.torsion.is_empty();
        parts.push(format!(
            "m={m}: counts {:?}, pi1 {:?}, H0 rank {}",
            b.complex.counts(),
            p.verdict,
            h0.free_rank
        ));
        record(d, &format!("pi1_2_0_{m}"), encode(&p).unwrap());
    }
    Line {
        id: "2",
        pass: ok,
        detail: parts.join("; "),
    }
}

fn c3a(lim: &Limits, d: &mut Digests) -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for m in [2, 3] {
        let b = nerve(2, 0, m, lim);
        let fib = b.frame_fibers();
        ok &= fib.iter().all(|h| h.keys().all(|&s| s == 1));
        parts.push(format!("m={m}: fiber sizes {fib:?}"));
        record(d, &format!("fibers_2_0_{m}"), format!("{fib:?}").into_bytes());
    }
    Line {
        id: "3a",
        pass: ok,
        detail: parts.join("; "),
    }
}

fn largest_fiber(m: i64) -> (usize, String) {
    let mut best = (0, String::new());
    for t in types_up_to(2, 0, 2).into_iter().skip(1) {
        let (_, dec) = seed(&t, m).unwrap();
        let f = framing_fiber(&dec.unframed()).unwrap();
        if f > best.0 {
            best = (f, format!("{} edge(s), {} vertices", t.edges.len(), t.vertices.len()));
        }
    }
    best
}

fn c3b(_: &Limits, d: &mut Digests) -> Line {
    let (f4, _) = largest_fiber(4);
    let (f5, at5) = largest_fiber(5);
    record(d, "fibers_search", format!("{f4} {f5} {at5}").into_bytes());
    Line {
        id: "3b",
        pass: f4 >= 2,
        detail: format!(
            "m=4: largest framing fiber {f4} (units of Z/4 are ±1, frames are taken mod sign); \
             first modulus with a fiber >= 2 is m=5: fiber {f5} on the type with {at5}"
        ),
    }
}

fn c4(_: &Limits, d: &mut Digests) -> Line {
    let mut checked = 0;
    let mut bad = Vec::new();
    let t20 = types_up_to(2, 0, 3);
    let t30 = types_up_to(3, 0, 3);
    for t in t20.iter().chain(&t30) {
        for m in [2, 3, 4, 5] {
            let k = abelian_local_kernel(t, m).unwrap();
            checked += 1;
            if k.generators != common::kernel_oracle(t, m) {
                bad.push(format!("{t:?} m={m}"));
            }
            record(d, &format!("kernel_{checked}"), encode(&k).unwrap());
        }
    }
    Line {
        id: "4",
        pass: bad.is_empty() && t20.len() == 7,
        detail: format!(
            "{} types of (2,0), {} of (3,0) up to rank 3, m in 2..=5: {checked} lattices, {} mismatches",
            t20.len(),
            t30.len(),
            bad.len()
        ),
    }
}

fn derived(lim: &Limits) -> (CoverSpec, Cover) {
    let base = Cover::new(&CoverSpec::identity(2, 0), lim).unwrap();
    let spec = derived_cover(&base, 2, lim).unwrap();
    let cover = Cover::new(&spec, lim).unwrap();
    (spec, cover)
}

fn c5(lim: &Limits, d: &mut Digests) -> Line {
    let (spec, cover) = derived(lim);
    let a = cover.analysis();
    let r = smoothness_hypothesis(&spec, lim).unwrap();
    record(d, "derived_spec", encode(&spec).unwrap());
    record(d, "smoothness", encode(&r).unwrap());
    Line {
        id: "5",
        pass: a.degree == 16 && a.genus == 17 && r.types.len() == 7 && r.holds && r.no_separating,
        detail: format!(
            "degree {}, genus {}, {} types; separating components: {}, cut pairs: {}",
            a.degree,
            a.genus,
            r.types.len(),
            r.types.iter().filter(|t| t.has_separating_component).count(),
            r.types.iter().filter(|t| t.has_cut_pair).count()
        ),
    }
}

fn c6(lim: &Limits, d: &mut Digests) -> Line {
    let (_, cover) = derived(lim);
    let dh = cover.deck_homology(2).unwrap();
    record(d, "deck_homology", format!("{:?}", dh.kernel).into_bytes());
    Line {
        id: "6",
        pass: dh.faithful && dh.kernel.is_empty() && dh.ambient.rank() == 34 && dh.deck.len() == 16,
        detail: format!(
            "H_1 rank {}, {} deck elements, kernel {:?}",
            dh.ambient.rank(),
            dh.deck.len(),
            dh.kernel
        ),
    }
}

fn c7(lim: &Limits, d: &mut Digests) -> Line {
    let (spec, cover) = derived(lim);
    let m = 2;
    let mut ok = true;
    let mut orders: BTreeMap<usize, usize> = BTreeMap::new();
    for t in types_up_to(2, 0, 3).into_iter().skip(1) {
        let (_, cs) = standard_multicurve(&t).unwrap();
        let k = looijenga_local_kernel(&t, &spec, m, lim).unwrap();
        let mut expect_index = 1i128;
        for e in 0..t.edges.len() {
            let c = cover.order(cover.eval(cs.curve_word(e)));
            *orders.entry(c).or_default() += 1;
            let mut row = vec![0; t.edges.len()];
            row[e] = m * c as i64;
            ok &= (c == 1 || c == 2) && k.generators.get(e) == Some(&row);
            expect_index *= (m * c as i64) as i128;
        }
        ok &= k.index() == Some(expect_index);
        record(d, &format!("looijenga_{}", k.edges.len()), encode(&k).unwrap());
    }
    Line {
        id: "7",
        pass: ok,
        detail: format!("edge counts by deck-image order {orders:?}"),
    }
}

fn c8(_: &Limits, _: &mut Digests) -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for (g, n) in common::catalog() {
        let top = max_edges(g, n);
        let at = enumerate_stable_graphs(g, n, top - 1).unwrap().len();
        let above = enumerate_stable_graphs(g, n, top).unwrap().len();
        ok &= at > 0 && above == 0;
        parts.push(format!("({g},{n}):{at}"));
    }
    Line {
        id: "8",
        pass: ok,
        detail: format!("maximal multicurves (3g-3+n curves) per signature {}", parts.join(" ")),
    }
}

fn c9(lim: &Limits, d: &mut Digests) -> Line {
    let nv = nerve(2, 0, 2, lim);
    let im = build_image_complex(&CoverSpec::identity(2, 0), 2, lim).unwrap();
    let (a, b) = (&im.complex, &nv.complex);
    let mut ok = a.ranks.len() == b.ranks.len();
    let mut maps: Vec<Vec<usize>> = Vec::new();
    for k in 0..a.ranks.len().min(b.ranks.len()) {
        let key = |x: &levelnerve::complexes::FinSimpSet, i: usize| {
            (x.ranks[k].simplices[i].clone(), x.ranks[k].variants.get(i).copied().unwrap_or(0))
        };
        let index: HashMap<_, usize> = (0..b.count(k)).map(|i| (key(b, i), i)).collect();
        let map: Vec<usize> = (0..a.count(k)).filter_map(|i| index.get(&key(a, i)).copied()).collect();
        ok &= map.len() == a.count(k) && a.count(k) == b.count(k);
        if ok && k > 0 {
            for i in 0..a.count(k) {
                let fa: Vec<usize> = a.ranks[k].faces[i].iter().map(|&f| maps[k - 1][f]).collect();
                ok &= fa == b.ranks[k].faces[map[i]];
            }
        }
        maps.push(map);
    }
    record(d, "image_identity", encode(a).unwrap());
    Line {
        id: "9",
        pass: ok,
        detail: format!(
            "image counts {:?}, nerve counts {:?}, acting group order {:?}",
            a.counts(),
            b.counts(),
            a.provenance.group_order
        ),
    }
}

type Criterion = fn(&Limits, &mut Digests) -> Line;

const CRITERIA: &[Criterion] = &[c1, c2, c3a, c3b, c4, c5, c6, c7, c8, c9];

fn limits(workers: usize) -> Limits {
    Limits {
        workers,
        ..Limits::default()
    }
}

fn main() {
    let mut lines = Vec::new();
    let mut first = Digests::new();
    for c in CRITERIA {
        let t = Instant::now();
        let l = c(&limits(1), &mut first);
        println!(
            "criterion {}: {} - {} ({:.2}s)",
            l.id,
            if l.pass { "PASS" } else { "FAIL" },
            l.detail,
            t.elapsed().as_secs_f64()
        );
        lines.push(l);
    }
    let t = Instant::now();
    let mut again = Digests::new();
    let mut parallel = Digests::new();
    for c in CRITERIA {
        c(&limits(1), &mut again);
        c(&limits(4), &mut parallel);
    }
    let det = first == again && first == parallel;
    println!(
        "criterion 10: {} - {} artifacts byte-identical across two runs and workers 1 vs 4 ({:.2}s)",
        if det { "PASS" } else { "FAIL" },
        first.len(),
        t.elapsed().as_secs_f64()
    );
    lines.push(Line {
        id: "10",
        pass: det,
        detail: String::new(),
    });
    let unexpected: Vec<&str> = lines
        .iter()
        .filter(|l| l.pass == KNOWN_UNATTAINABLE.contains(&l.id))
        .map(|l| l.id)
        .collect();
    let passed = lines.iter().filter(|l| l.pass).count();
    println!(
        "acceptance: {passed}/{} clauses pass; known unattainable: {}",
        lines.len(),
        KNOWN_UNATTAINABLE.join(",")
    );
    if !unexpected.is_empty() {
        println!("acceptance: unexpected outcome for {}", unexpected.join(","));
        std::process::exit(1);
    }
}
