//! Batch front end: family generation, pattern classification, and the
//! subgraph/packing solvers, with reproducible seeded runs and a manifest
//! written next to every produced file.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};
use subkern::detect;
use subkern::error::Error;
use subkern::families::{self, build_family, FamilySpec};
use subkern::graph::Graph;
use subkern::kernel;
use subkern::matching::RandomnessConfig;
use subkern::oracle::{self, OracleBudget};
use subkern::recognize::{self, ComponentClass};

#[derive(Parser)]
#[command(
    name = "subkern",
    version,
    about = "Subgraph detection, disjoint packing, and kernelization toolkit"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write one of the named pattern families as a graph file
    GenFamily(GenFamily),
    /// Print a pattern's split certificate for given (a,b,c,d), or NONE
    Classify(Classify),
    /// Decide subgraph presence or H-packing feasibility
    Solve(Solve),
    /// Shrink an instance while preserving its answer
    Kernelize(Kernelize),
    /// Check a kernelize output directory against the original instance
    Verify(Verify),
}

#[derive(Args)]
struct GenFamily {
    /// One of: path, clique, biclique, double_broom, opera_house, fountain,
    /// long_fountain, subdiv_star, subdiv_tree, diamond_fan, canonical_k3,
    /// canonical_p3
    #[arg(long)]
    kind: String,
    /// Size parameter (pendant/leg/copy count, depending on the kind)
    #[arg(long)]
    n: Option<usize>,
    /// Backbone length (path/cycle kinds)
    #[arg(long)]
    s: Option<usize>,
    /// Stem length (long_fountain)
    #[arg(long)]
    t: Option<usize>,
    /// Edge count of a plain path
    #[arg(long)]
    len: Option<usize>,
    /// Output graph file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Classify {
    /// Comma-separated a,b,c,d
    #[arg(long)]
    abcd: String,
    /// Pattern graph file
    #[arg(long)]
    graph: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum SolveMode {
    Subgraph,
    Packing,
}

#[derive(Args)]
struct Solve {
    #[arg(long, value_enum)]
    mode: SolveMode,
    /// Host graph file
    #[arg(long)]
    host: PathBuf,
    /// Pattern graph file
    #[arg(long)]
    pattern: PathBuf,
    /// Splittability budget: route through the randomized
    /// matching-splittable solver with this separator size
    #[arg(long)]
    c: Option<usize>,
    /// Number of disjoint pattern copies (packing mode only)
    #[arg(long)]
    t: Option<usize>,
    /// Seed for all randomized components
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Force the exhaustive reference solver (desk scale only)
    #[arg(long, default_value_t = false)]
    brute: bool,
    /// Write the found model (pattern vertex ↦ host vertex) here
    #[arg(long)]
    model_out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum KernelMode {
    /// Many-one kernel for packing t copies of a small/thin pattern
    Packing,
    /// Many-one kernel for the star-with-paths / fountain-with-triangles
    /// pattern shapes; split parameters derive from the shape
    Subgraph,
    /// Oracle-aided kernel for any splittable pattern
    Turing,
}

#[derive(Args)]
struct Kernelize {
    #[arg(long, value_enum)]
    mode: KernelMode,
    /// Host graph file
    #[arg(long)]
    host: PathBuf,
    /// Pattern graph file
    #[arg(long)]
    pattern: PathBuf,
    /// Comma-separated a,b,c,d split budget (packing uses a,b with c=d=0;
    /// turing uses all four; subgraph mode forbids the flag)
    #[arg(long)]
    abcd: Option<String>,
    /// Number of disjoint pattern copies (packing mode only)
    #[arg(long)]
    t: Option<usize>,
    /// Node cap for the reference oracle answering turing subcalls
    #[arg(long)]
    cap: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Verify {
    /// Directory produced by `kernelize`
    #[arg(long)]
    kernel_out: PathBuf,
    /// Original host graph file
    #[arg(long)]
    host: PathBuf,
    /// Original pattern graph file
    #[arg(long)]
    pattern: PathBuf,
    /// Node cap for the reference oracle
    #[arg(long)]
    cap: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are successful outcomes, everything else is usage
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::GenFamily(a) => gen_family(a),
        Cmd::Classify(a) => classify(a),
        Cmd::Solve(a) => solve(a),
        Cmd::Kernelize(a) => kernelize(a),
        Cmd::Verify(a) => verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Error::Resource(msg)) => {
            eprintln!("resource error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Collects what a run touched and writes `<output>.manifest` beside the
/// outputs: command, arguments, seed, input hashes, output list, wall time.
/// Rerunning the same command line reproduces the outputs byte for byte
/// (the manifest itself carries the timing and is excluded from that
/// guarantee).
struct Manifest {
    command: &'static str,
    seed: Option<u64>,
    inputs: Vec<(PathBuf, String)>,
    outputs: Vec<PathBuf>,
    start: Instant,
}

impl Manifest {
    fn new(command: &'static str) -> Self {
        Manifest {
            command,
            seed: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
            start: Instant::now(),
        }
    }

    fn read_input(&mut self, path: &Path) -> Result<String, Error> {
        let data = fs::read(path)
            .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        let hash = hex(&Sha256::digest(&data));
        self.inputs.push((path.to_path_buf(), hash));
        String::from_utf8(data)
            .map_err(|_| Error::Input(format!("{} is not UTF-8", path.display())))
    }

    fn write_output(&mut self, path: &Path, contents: &str) -> Result<(), Error> {
        fs::write(path, contents)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
        self.outputs.push(path.to_path_buf());
        Ok(())
    }

    fn finish(self) -> Result<(), Error> {
        let Some(first) = self.outputs.first() else { return Ok(()) };
        let mut text = String::new();
        let _ = writeln!(text, "command: {}", self.command);
        let args: Vec<String> = std::env::args().skip(1).collect();
        let _ = writeln!(text, "arguments: {}", args.join(" "));
        if let Some(seed) = self.seed {
            let _ = writeln!(text, "seed: {seed}");
        }
        for (path, hash) in &self.inputs {
            let _ = writeln!(text, "input: {} sha256={hash}", path.display());
        }
        for path in &self.outputs {
            let _ = writeln!(text, "output: {}", path.display());
        }
        let _ = writeln!(text, "wall_ms: {}", self.start.elapsed().as_millis());
        let mpath = PathBuf::from(format!("{}.manifest", first.display()));
        fs::write(&mpath, text)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", mpath.display())))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn need(param: Option<usize>, kind: &str, name: &str) -> Result<usize, Error> {
    param.ok_or_else(|| Error::Input(format!("kind '{kind}' requires --{name}")))
}

fn gen_family(args: GenFamily) -> Result<(), Error> {
    let GenFamily { kind, n, s, t, len, out } = args;
    let k = kind.as_str();
    let spec = match k {
        "path" => FamilySpec::Path { len: need(len, k, "len")? },
        "clique" => FamilySpec::Clique { n: need(n, k, "n")? },
        "biclique" => FamilySpec::Biclique { n: need(n, k, "n")? },
        "double_broom" => {
            FamilySpec::DoubleBroom { s: need(s, k, "s")?, n: need(n, k, "n")? }
        }
        "opera_house" => {
            FamilySpec::OperaHouse { s: need(s, k, "s")?, n: need(n, k, "n")? }
        }
        "fountain" => FamilySpec::Fountain { s: need(s, k, "s")?, n: need(n, k, "n")? },
        "long_fountain" => FamilySpec::LongFountain {
            s: need(s, k, "s")?,
            t: need(t, k, "t")?,
            n: need(n, k, "n")?,
        },
        "subdiv_star" => FamilySpec::SubdivStar { n: need(n, k, "n")? },
        "subdiv_tree" => {
            FamilySpec::SubdivTree { s: need(s, k, "s")?, n: need(n, k, "n")? }
        }
        "diamond_fan" => FamilySpec::DiamondFan { n: need(n, k, "n")? },
        "canonical_k3" => FamilySpec::CanonicalK3 { n: need(n, k, "n")? },
        "canonical_p3" => FamilySpec::CanonicalP3 { n: need(n, k, "n")? },
        other => return Err(Error::Input(format!("unknown family kind '{other}'"))),
    };
    let pattern = build_family(&spec)?;
    let mut manifest = Manifest::new("gen-family");
    manifest.write_output(&out, &pattern.graph.to_text())?;
    manifest.finish()
}

fn parse_abcd(joined: &str) -> Result<(usize, usize, usize, usize), Error> {
    let parts: Vec<&str> = joined.split(',').collect();
    let [a, b, c, d] = parts.as_slice() else {
        return Err(Error::Input("--abcd wants exactly 'a,b,c,d'".into()));
    };
    let parse = |tok: &str, name: &str| -> Result<usize, Error> {
        tok.trim()
            .parse()
            .map_err(|_| Error::Input(format!("--abcd: '{tok}' is not a valid {name}")))
    };
    Ok((parse(a, "a")?, parse(b, "b")?, parse(c, "c")?, parse(d, "d")?))
}

fn classify(args: Classify) -> Result<(), Error> {
    let (a, b, c, d) = parse_abcd(&args.abcd)?;
    let mut manifest = Manifest::new("classify");
    let h = Graph::from_text(&manifest.read_input(&args.graph)?)?;
    match recognize::find_split(&h, a, b, c, d) {
        None => println!("NONE"),
        Some(cert) => {
            println!("separator: {}", join(&cert.s));
            for comp in &cert.components {
                match &comp.class {
                    ComponentClass::Small => {
                        println!("component: {} | small", join(&comp.vertices));
                    }
                    ComponentClass::Thin { a_side, b_side, b_n } => {
                        println!(
                            "component: {} | thin | a: {} | b: {} | bn: {}",
                            join(&comp.vertices),
                            join(a_side),
                            join(b_side),
                            join(b_n),
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

fn join(ids: &[usize]) -> String {
    if ids.is_empty() {
        return "-".into();
    }
    ids.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn solve(args: Solve) -> Result<(), Error> {
    if args.t.is_some() && args.mode != SolveMode::Packing {
        return Err(Error::Input("--t only applies to --mode packing".into()));
    }
    let mut manifest = Manifest::new("solve");
    manifest.seed = Some(args.seed);
    let host = Graph::from_text(&manifest.read_input(&args.host)?)?;
    let base = Graph::from_text(&manifest.read_input(&args.pattern)?)?;
    let pattern = match args.mode {
        SolveMode::Subgraph => base,
        SolveMode::Packing => families::disjoint_copies(&base, args.t.unwrap_or(1)),
    };
    let model: Option<BTreeMap<usize, usize>> = if args.brute {
        oracle::brute_subgraph(&host, &pattern, &OracleBudget::default())?
    } else if let Some(c) = args.c {
        let rc = RandomnessConfig::new(args.seed);
        detect::matching_splittable_test(&host, &pattern, c, &rc)?
    } else {
        oracle::brute_subgraph(&host, &pattern, &OracleBudget::default())?
    };
    match &model {
        Some(map) => {
            println!("YES");
            if let Some(out) = &args.model_out {
                let mut text = String::new();
                for (p, h) in map {
                    let _ = writeln!(text, "m {p} {h}");
                }
                manifest.write_output(out, &text)?;
            }
        }
        None => println!("NO"),
    }
    manifest.finish()
}

fn has_triangle(g: &Graph) -> bool {
    g.edges()
        .into_iter()
        .any(|(u, v)| g.neighbors(u).iter().any(|&w| w != v && g.has_edge(w, v)))
}

fn yes_no(answer: bool) -> &'static str {
    if answer {
        "YES"
    } else {
        "NO"
    }
}

fn make_dir(path: &Path) -> Result<(), Error> {
    fs::create_dir_all(path)
        .map_err(|e| Error::Input(format!("cannot create {}: {e}", path.display())))
}

fn kernelize(args: Kernelize) -> Result<(), Error> {
    if args.t.is_some() && args.mode != KernelMode::Packing {
        return Err(Error::Input("--t only applies to --mode packing".into()));
    }
    if args.cap.is_some() && args.mode != KernelMode::Turing {
        return Err(Error::Input("--cap only applies to --mode turing".into()));
    }
    let mut manifest = Manifest::new("kernelize");
    let host = Graph::from_text(&manifest.read_input(&args.host)?)?;
    let pattern = Graph::from_text(&manifest.read_input(&args.pattern)?)?;
    make_dir(&args.out)?;
    match args.mode {
        KernelMode::Packing => {
            let Some(abcd) = &args.abcd else {
                return Err(Error::Input("--mode packing requires --abcd".into()));
            };
            let (a, b, c, d) = parse_abcd(abcd)?;
            if c != 0 || d != 0 {
                return Err(Error::Input(
                    "packing mode works separator-free; pass c and d as 0".into(),
                ));
            }
            let inst = kernel::PackingInstance::new(host, pattern, args.t.unwrap_or(1))?;
            let out = kernel::packing_kernel(&inst, a, b)?;
            manifest.write_output(&args.out.join("host.txt"), &out.host.to_text())?;
            manifest.write_output(&args.out.join("pattern.txt"), &out.pattern.to_text())?;
            manifest.write_output(&args.out.join("count.txt"), &format!("{}\n", out.count))?;
            println!(
                "kernel host: {} vertices (from {})",
                out.host.vertex_count(),
                inst.host.vertex_count()
            );
        }
        KernelMode::Subgraph => {
            if args.abcd.is_some() {
                return Err(Error::Input(
                    "subgraph mode derives its split from the pattern shape; drop --abcd".into(),
                ));
            }
            let before = host.vertex_count();
            let out = if has_triangle(&pattern) {
                kernel::fountain_triangles_kernel(&host, &pattern)?
            } else {
                kernel::star_paths_kernel(&host, &pattern)?
            };
            manifest.write_output(&args.out.join("host.txt"), &out.host.to_text())?;
            manifest.write_output(&args.out.join("pattern.txt"), &out.pattern.to_text())?;
            println!("kernel host: {} vertices (from {before})", out.host.vertex_count());
        }
        KernelMode::Turing => {
            let Some(abcd) = &args.abcd else {
                return Err(Error::Input("--mode turing requires --abcd".into()));
            };
            let (a, b, c, d) = parse_abcd(abcd)?;
            let budget = args.cap.map(OracleBudget::capped).unwrap_or_default();
            let mut oracle_fn = kernel::brute_subgraph_oracle(budget);
            let out = kernel::turing_kernel(&host, &pattern, a, b, c, d, &mut oracle_fn)?;
            let mut summary = String::new();
            match &out.split {
                None => {
                    let _ = writeln!(summary, "split: NONE");
                }
                Some(s) => {
                    let _ = writeln!(summary, "split: {}", join(s));
                }
            }
            let _ = writeln!(summary, "answer: {}", yes_no(out.answer));
            for (i, sub) in out.subinstances.iter().enumerate() {
                let pins = if sub.pins.is_empty() {
                    "-".to_string()
                } else {
                    sub.pins
                        .iter()
                        .map(|(p, h)| format!("{p}:{h}"))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                let _ = writeln!(
                    summary,
                    "sub {i}: file=sub_{i:03}.txt answer={} pins={pins} vertices={}",
                    yes_no(sub.answer),
                    join(&sub.vertices),
                );
            }
            manifest.write_output(&args.out.join("summary.txt"), &summary)?;
            for (i, sub) in out.subinstances.iter().enumerate() {
                let induced = host.induced_subgraph(&sub.vertices)?;
                let name = format!("sub_{i:03}.txt");
                manifest.write_output(&args.out.join(name), &induced.graph.to_text())?;
            }
            println!("{}", yes_no(out.answer));
        }
    }
    manifest.finish()
}

fn verify(args: Verify) -> Result<(), Error> {
    let mut manifest = Manifest::new("verify");
    let host = Graph::from_text(&manifest.read_input(&args.host)?)?;
    let pattern = Graph::from_text(&manifest.read_input(&args.pattern)?)?;
    let budget = args.cap.map(OracleBudget::capped).unwrap_or_default();

    let summary_path = args.kernel_out.join("summary.txt");
    if summary_path.exists() {
        // turing output: the directory's answer line is the kernel's verdict
        let text = manifest.read_input(&summary_path)?;
        let verdict = text
            .lines()
            .find_map(|l| l.strip_prefix("answer: "))
            .ok_or_else(|| Error::Input("summary.txt lacks an answer line".into()))?;
        let got = verdict.trim() == "YES";
        let want = oracle::brute_subgraph(&host, &pattern, &budget)?.is_some();
        println!("original: {} | kernelized: {}", yes_no(want), yes_no(got));
        if want != got {
            return Err(Error::Input("answers disagree".into()));
        }
        return Ok(());
    }

    let khost = Graph::from_text(&manifest.read_input(&args.kernel_out.join("host.txt"))?)?;
    let kpattern = Graph::from_text(&manifest.read_input(&args.kernel_out.join("pattern.txt"))?)?;
    let count_path = args.kernel_out.join("count.txt");
    let (want, got) = if count_path.exists() {
        let count: usize = manifest
            .read_input(&count_path)?
            .trim()
            .parse()
            .map_err(|_| Error::Input("count.txt does not hold a number".into()))?;
        (
            oracle::brute_packing(&host, &pattern, count, &budget)?,
            oracle::brute_packing(&khost, &kpattern, count, &budget)?,
        )
    } else {
        (
            oracle::brute_subgraph(&host, &pattern, &budget)?.is_some(),
            oracle::brute_subgraph(&khost, &kpattern, &budget)?.is_some(),
        )
    };
    println!(
        "original: {} ({} vertices) | kernelized: {} ({} vertices)",
        yes_no(want),
        host.vertex_count(),
        yes_no(got),
        khost.vertex_count()
    );
    if want != got {
        return Err(Error::Input("answers disagree".into()));
    }
    Ok(())
}
