//! Command-line front end. `dispatch` returns the process exit code:
//! 0 success, 1 verified-negative result, 2 usage or input error,
//! 3 resource bound exceeded.

use std::io::Write;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::complexes::{build_abelian_nerve, build_image_complex, cross_validate, homology, pi1_report, FinSimpSet, Verdict};
use crate::covers::{analyze_cover, derived_cover, Cover, CoverSpec};
use crate::decomp::Decomposition;
use crate::error::{Error, Result};
use crate::io::{
    decode, encode, peek_kind, read_artifact, read_file, sha256_hex, Artifact, FileDigest, ReplayReport, RunManifest,
    TypeCatalog,
};
use crate::limits::Limits;
use crate::monodromy::{abelian_local_kernel, looijenga_local_kernel, smoothness_hypothesis, stratum_report, LevelKind};
use crate::surface::graph::{all_stable_graphs, enumerate_stable_graphs, StableGraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug, Serialize)]
#[command(name = "levelnerve", version, about = "Nerves of level structures and local monodromy at small genus")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Global {
    /// Largest orbit or generated group any enumeration may reach.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    pub max_orbit: usize,
    /// Largest cover degree.
    #[arg(long, global = true, default_value_t = 4096)]
    pub max_degree: usize,
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<String>,
    /// Manifest path; defaults to `<out>.manifest.json` when `--out` is set.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub manifest: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TypeSel {
    #[arg(long)]
    pub g: usize,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    /// Rank of the stratum (edge count minus one).
    #[arg(long, default_value_t = 0)]
    pub rank: usize,
    /// Position in the enumeration of that rank.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
}

impl TypeSel {
    fn graph(&self) -> Result<StableGraph> {
        let ts = enumerate_stable_graphs(self.g, self.n, self.rank)?;
        let len = ts.len();
        ts.into_iter().nth(self.index).ok_or_else(|| {
            Error::Argument(format!(
                "type index {} out of range: ({}, {}) has {len} types of rank {}",
                self.index, self.g, self.n, self.rank
            ))
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverKind {
    Identity,
    Homology,
    Derived,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    Trivial,
    Nontrivial,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    Abelian,
    Looijenga,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Stable graphs of a signature, by edge count.
    Types {
        #[arg(long)]
        g: usize,
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Only this rank.
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Build a cover description, or analyze one.
    Cover {
        #[arg(long, value_enum, default_value_t = CoverKind::Identity)]
        kind: CoverKind,
        #[arg(long, default_value_t = 2)]
        g: usize,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: i64,
        /// Exponent of the derived cover.
        #[arg(long, default_value_t = 2)]
        ell: i64,
        /// Existing cover: the base of `derived`, or the cover to analyze.
        #[arg(long)]
        from: Option<String>,
        /// Emit the degree, genus and ramification instead of the cover description.
        #[arg(long)]
        analyze: bool,
    },
    /// Preimage of a stable-graph type under a cover.
    Lift {
        cover: String,
        #[arg(long, default_value_t = 0)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 2)]
        m: i64,
    },
    /// Abelian nerve of the boundary.
    Nerve {
        #[arg(long)]
        g: usize,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long)]
        m: i64,
    },
    /// Image complex of a cover.
    Image {
        cover: String,
        #[arg(long)]
        m: i64,
    },
    /// Edge-path group of a complex.
    Pi1 {
        complex: String,
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Integral homology of a complex.
    Homology {
        complex: String,
        /// Single degree; all degrees when absent.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Local monodromy kernel at a stratum.
    Kernel {
        #[command(flatten)]
        sel: TypeSel,
        #[arg(long)]
        m: i64,
        /// Looijenga level of this cover instead of the abelian level.
        #[arg(long)]
        cover: Option<String>,
    },
    /// Smoothness hypothesis of a cover, or a stratum report.
    Report {
        #[arg(long)]
        cover: Option<String>,
        #[arg(long)]
        g: Option<usize>,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 2)]
        m: i64,
        #[arg(long, value_enum, default_value_t = KindArg::Abelian)]
        kind: KindArg,
    },
    /// Check a decomposition, a complex or a run manifest.
    Validate { artifact: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Types { .. } => "types",
            Command::Cover { .. } => "cover",
            Command::Lift { .. } => "lift",
            Command::Nerve { .. } => "nerve",
            Command::Image { .. } => "image",
            Command::Pi1 { .. } => "pi1",
            Command::Homology { .. } => "homology",
            Command::Kernel { .. } => "kernel",
            Command::Report { .. } => "report",
            Command::Validate { .. } => "validate",
        }
    }

    fn inputs(&self) -> Vec<String> {
        match self {
            Command::Cover { from, .. } => from.iter().cloned().collect(),
            Command::Lift { cover, .. } | Command::Image { cover, .. } => vec![cover.clone()],
            Command::Pi1 { complex, .. } | Command::Homology { complex, .. } => vec![complex.clone()],
            Command::Kernel { cover, .. } | Command::Report { cover, .. } => cover.iter().cloned().collect(),
            Command::Validate { artifact } => vec![artifact.clone()],
            Command::Types { .. } | Command::Nerve { .. } => vec![],
        }
    }
}

/// Encoded result plus whether it is a positive verdict.
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub positive: bool,
}

fn ok<T: Artifact>(x: &T) -> Result<Outcome> {
    Ok(Outcome {
        bytes: encode(x)?,
        positive: true,
    })
}

fn verdict<T: Artifact>(x: &T, positive: bool) -> Result<Outcome> {
    Ok(Outcome {
        bytes: encode(x)?,
        positive,
    })
}

fn check_m(m: i64) -> Result<()> {
    if m < 2 {
        return Err(Error::Argument(format!("modulus must be at least 2, got {m}")));
    }
    Ok(())
}

pub fn limits_of(g: &Global) -> Limits {
    Limits {
        max_orbit: g.max_orbit,
        max_degree: g.max_degree,
        workers: g.workers,
        ..Limits::default()
    }
}

/// Run one parsed command, producing its canonical output.
pub fn run(cmd: &Command, limits: &Limits) -> Result<Outcome> {
    match cmd {
        Command::Types { g, n, rank } => {
            let mut by_edges = all_stable_graphs(*g, *n)?;
            if let Some(k) = rank {
                by_edges.retain(|e, _| *e == k + 1);
            }
            ok(&TypeCatalog { g: *g, n: *n, by_edges })
        }
        Command::Cover {
            kind,
            g,
            n,
            m,
            ell,
            from,
            analyze,
        } => {
            let loaded = from.as_deref().map(read_artifact::<CoverSpec>).transpose()?;
            let spec = match kind {
                CoverKind::Identity => loaded.unwrap_or_else(|| CoverSpec::identity(*g, *n)),
                CoverKind::Homology => {
                    check_m(*m)?;
                    CoverSpec::homology_cover(*g, *n, *m)
                }
                CoverKind::Derived => {
                    let base = loaded.unwrap_or_else(|| CoverSpec::identity(*g, *n));
                    derived_cover(&Cover::new(&base, limits)?, *ell, limits)?
                }
            };
            if *analyze {
                ok(&analyze_cover(&spec, limits)?)
            } else {
                Cover::new(&spec, limits)?;
                ok(&spec)
            }
        }
        Command::Lift { cover, rank, index, m } => {
            check_m(*m)?;
            let spec: CoverSpec = read_artifact(cover)?;
            let t = TypeSel {
                g: spec.base.g,
                n: spec.base.n,
                rank: *rank,
                index: *index,
            }
            .graph()?;
            let (_, cs) = crate::surface::catalog::standard_multicurve(&t)?;
            ok(&Cover::new(&spec, limits)?.lift(&cs, *m)?)
        }
        Command::Nerve { g, n, m } => {
            check_m(*m)?;
            ok(&build_abelian_nerve(*g, *n, *m, limits)?.complex)
        }
        Command::Image { cover, m } => {
            check_m(*m)?;
            let spec: CoverSpec = read_artifact(cover)?;
            ok(&build_image_complex(&spec, *m, limits)?.complex)
        }
        Command::Pi1 { complex, expect } => {
            let x: FinSimpSet = read_artifact(complex)?;
            let r = pi1_report(&x);
            let positive = match expect {
                None => true,
                Some(Expect::Trivial) => r.verdict == Verdict::Trivial,
                Some(Expect::Nontrivial) => matches!(r.verdict, Verdict::Nontrivial { .. }),
            };
            verdict(&r, positive)
        }
        Command::Homology { complex, degree } => {
            let x: FinSimpSet = read_artifact(complex)?;
            let qs: Vec<usize> = match degree {
                Some(q) => vec![*q],
                None => (0..x.ranks.len()).collect(),
            };
            let hs = qs.into_iter().map(|q| homology(&x, q)).collect::<Result<Vec<_>>>()?;
            ok(&hs)
        }
        Command::Kernel { sel, m, cover } => {
            let t = sel.graph()?;
            match cover {
                None => ok(&abelian_local_kernel(&t, *m)?),
                Some(c) => ok(&looijenga_local_kernel(&t, &read_artifact(c)?, *m, limits)?),
            }
        }
        Command::Report {
            cover,
            g,
            n,
            rank,
            index,
            m,
            kind,
        } => match (cover, g) {
            (Some(c), _) => {
                let r = smoothness_hypothesis(&read_artifact(c)?, limits)?;
                ok(&r)
            }
            (None, Some(g)) => {
                let t = TypeSel {
                    g: *g,
                    n: *n,
                    rank: *rank,
                    index: *index,
                }
                .graph()?;
                let kind = match kind {
                    KindArg::Abelian => LevelKind::Abelian,
                    KindArg::Looijenga => LevelKind::Looijenga,
                };
                ok(&stratum_report(&t, *m, kind)?)
            }
            (None, None) => Err(Error::Argument("report needs --cover or --g".into())),
        },
        Command::Validate { artifact } => {
            let bytes = read_file(artifact)?;
            match peek_kind(&bytes)?.as_str() {
                "decomposition" => {
                    let d: Decomposition = decode(&bytes)?;
                    let r = d.validate()?;
                    let v = r.is_valid();
                    verdict(&r, v)
                }
                "complex" => {
                    let x: FinSimpSet = decode(&bytes)?;
                    let r = cross_validate(&x, None)?;
                    let v = r.passed() && x.simplicial_identity_violations().is_empty();
                    verdict(&r, v)
                }
                "manifest" => {
                    let r = replay(&decode(&bytes)?)?;
                    let v = r.passed();
                    verdict(&r, v)
                }
                k => Err(Error::Argument(format!("cannot validate a {k:?} artifact"))),
            }
        }
    }
}

/// Re-run a manifest's command and compare digests.
pub fn replay(m: &RunManifest) -> Result<ReplayReport> {
    let cli = Cli::try_parse_from(std::iter::once("levelnerve".to_string()).chain(m.argv.iter().cloned()))
        .map_err(|e| Error::Argument(format!("manifest argv: {e}")))?;
    let mut mismatches = Vec::new();
    for d in &m.inputs {
        match read_file(&d.path) {
            Ok(b) if sha256_hex(&b) == d.sha256 => {}
            Ok(_) => mismatches.push(format!("input {} changed", d.path)),
            Err(e) => mismatches.push(e.to_string()),
        }
    }
    let inputs_match = mismatches.is_empty();
    let out = run(&cli.command, &limits_of(&cli.global))?;
    let digest = sha256_hex(&out.bytes);
    let outputs_match = m.outputs.iter().all(|d| d.sha256 == digest);
    if !outputs_match {
        mismatches.push(format!("output digest {digest} differs from the recorded one"));
    }
    Ok(ReplayReport {
        command: m.command.clone(),
        inputs_match,
        outputs_match,
        mismatches,
    })
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource { .. } => EXIT_RESOURCE,
        Error::Oracle(_) => EXIT_NEGATIVE,
        _ => EXIT_USAGE,
    }
}

/// Parse `argv` (without the program name), run, and emit outputs.
pub fn dispatch<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("levelnerve".to_string()).chain(argv.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{e}");
            return code;
        }
    };
    let started = Instant::now();
    let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let limits = limits_of(&cli.global);
    let out = match run(&cli.command, &limits) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "levelnerve: {e}");
            return exit_code(&e);
        }
    };
    let code = if out.positive { EXIT_OK } else { EXIT_NEGATIVE };
    let Some(path) = &cli.global.out else {
        if let Err(e) = stdout.write_all(&out.bytes) {
            let _ = writeln!(stderr, "levelnerve: {e}");
            return EXIT_USAGE;
        }
        return code;
    };
    let emit = || -> Result<()> {
        crate::io::write_file(path, &out.bytes)?;
        let inputs = cli
            .command
            .inputs()
            .iter()
            .map(|p| FileDigest::of_file(p))
            .collect::<Result<Vec<_>>>()?;
        let manifest = RunManifest {
            tool: "levelnerve".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: cli.command.name().into(),
            argv: argv.clone(),
            parameters: serde_json::to_value(&cli).map_err(|e| Error::Schema(e.to_string()))?,
            inputs,
            outputs: vec![FileDigest {
                path: path.clone(),
                sha256: sha256_hex(&out.bytes),
            }],
            limits: (&limits).into(),
            exit_code: code,
            wall_time_ms: started.elapsed().as_millis() as u64,
            started_unix,
        };
        let mpath = cli.global.manifest.clone().unwrap_or_else(|| format!("{path}.manifest.json"));
        crate::io::write_file(&mpath, &encode(&manifest)?)
    };
    match emit() {
        Ok(()) => code,
        Err(e) => {
            let _ = writeln!(stderr, "levelnerve: {e}");
            exit_code(&e)
        }
    }
}
