//! The `kanfib` command-line driver and its `.kf` text format.

pub mod format;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kanfib::action::{free_quotient, strict_2group_action_groupoid, strict_action_groupoid, strictify};
use kanfib::bundle::{fiber, invariant_objects, pullback, pushforward};
use kanfib::groupoid::{nerve, FiniteGroupoid};
use kanfib::hom::{count_maps, cylinder, enumerate_maps};
use kanfib::kan::{check_equivalence, check_fibration, check_hypercover, check_kan, classify_n_groupoid, KanMode};
use kanfib::lambda::lambda_extract;
use kanfib::reduction::{check_isotropy_consequences, is_2_isotropy_free, reduce_to_1};
use kanfib::sample::{random_crossed_module, random_groupoid, random_strict_action};
use kanfib::simplicial::{standard_complex, StandardKind};
use kanfib::two_group::{classifying_2group, crossed_module_to_grouplike};
use kanfib::{FibrationBundle, SimplicialMap, SimplicialSet, StrictAction};

pub use format::{parse, serialize, Document, FormatError, Value};
pub use report::{OutputFormat, Report, Status};

#[derive(Parser, Debug)]
#[command(name = "kanfib", version, about = "Kan conditions, fibrations and 2-group actions on finite simplicial sets")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// 0 prints one line per check, 1 adds witnesses and notes, 2 adds parts.
    #[arg(long, global = true, env = "KANFIB_VERBOSITY", default_value_t = 1)]
    pub verbosity: u8,
    /// Seed for sampled inputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Truncation level for sets built from groupoids, groups and crossed
    /// modules.
    #[arg(long, global = true, default_value_t = 3)]
    pub depth: usize,
    /// Write built documents here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify a condition.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Construct a value and print it as a document.
    #[command(subcommand)]
    Build(BuildCommand),
    /// Read data off a fibration.
    #[command(subcommand)]
    Extract(ExtractCommand),
    /// Maps from a standard complex.
    #[command(subcommand)]
    Hom(HomCommand),
    /// Print a seeded random value.
    Sample {
        #[arg(value_enum)]
        kind: SampleKind,
    },
    /// Print a document in canonical form.
    Fmt(Input),
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// A `.kf` document.
    pub file: PathBuf,
    /// The block to use when the document has several candidates.
    #[arg(long)]
    pub block: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct BundleInput {
    #[command(flatten)]
    pub input: Input,
    /// Level from which lifts must be unique.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
}

#[derive(Subcommand, Debug)]
pub enum CheckCommand {
    /// Kan(m,j), or Kan!(m,j) with --unique.
    Kan {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        unique: bool,
    },
    /// Kan(m) for m ≥ 1 and Kan!(m) for m > n.
    Ngroupoid {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        n: usize,
    },
    Fibration(BundleInput),
    Hypercover(BundleInput),
    Equivalence(BundleInput),
    /// 2-isotropy freeness and its consequences.
    Isotropy(Input),
}

#[derive(Subcommand, Debug)]
pub enum BuildCommand {
    /// Nerve of a groupoid or group.
    Nerve(Input),
    /// Classifying 2-group of a crossed module.
    B2group(Input),
    /// Fibration of a strict group action.
    Action(Input),
    /// Fibration of a strict crossed module action.
    Action2(Input),
    /// Pull a fibration back along a map into its base.
    Pullback {
        #[command(flatten)]
        bundle: BundleInput,
        /// Map block to pull back along.
        #[arg(long)]
        along: String,
    },
    /// Push a fibration forward along a hypercover out of its base.
    Pushforward {
        #[command(flatten)]
        bundle: BundleInput,
        #[arg(long)]
        along: String,
    },
    /// A free strict action equivalent to a fibration over a group nerve.
    Strictify(BundleInput),
    /// Orbit groupoid of a free action.
    Quotient(Input),
    /// The 1-groupoid of a 2-isotropy free 2-groupoid.
    Reduce(Input),
    /// The cylinder set X^[k].
    Cylinder {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExtractCommand {
    /// Spans and transports of a fibration over a group nerve.
    Lambda(BundleInput),
    /// The fiber over a base vertex.
    Fiber {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        vertex: usize,
    },
    /// Fiber objects fixed up to isomorphism by every base loop.
    Invariants(BundleInput),
}

#[derive(Args, Debug, Clone)]
pub struct HomArgs {
    #[command(flatten)]
    pub input: Input,
    /// `simplex:m`, `horn:m:j` or `boundary:m`.
    #[arg(long)]
    pub domain: String,
}

#[derive(Subcommand, Debug)]
pub enum HomCommand {
    Count(HomArgs),
    List {
        #[command(flatten)]
        args: HomArgs,
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SampleKind {
    Groupoid,
    CrossedModule,
    Action,
}

/// What a run printed and its exit code.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses arguments (the first is the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let name = command_name(&cli.command);
    let (report, doc) = match execute(cli) {
        Ok(x) => x,
        Err(Failure::Usage(kind, msg)) => (Report::usage_error(name.clone(), kind, msg), None),
        Err(Failure::Domain(e)) => {
            let mut r = Report::new(name.clone());
            r.fail_with(&e);
            (r, None)
        }
    };
    let rendered = report.render(cli.format, cli.verbosity);
    let mut out = Outcome {
        code: report.exit_code(),
        stdout: String::new(),
        stderr: String::new(),
    };
    match (doc, &cli.out) {
        (Some(d), Some(path)) => {
            if let Err(e) = std::fs::write(path, serialize(&d)) {
                let r = Report::usage_error(name, "Io", format!("{}: {e}", path.display()));
                out.code = r.exit_code();
                out.stderr = r.render(cli.format, cli.verbosity);
            } else {
                out.stdout = rendered;
            }
        }
        (Some(d), None) => {
            out.stdout = serialize(&d);
            out.stderr = rendered;
        }
        (None, _) => out.stdout = rendered,
    }
    out
}

fn command_name(c: &Command) -> String {
    let sub = match c {
        Command::Check(c) => match c {
            CheckCommand::Kan { .. } => "check kan",
            CheckCommand::Ngroupoid { .. } => "check ngroupoid",
            CheckCommand::Fibration(_) => "check fibration",
            CheckCommand::Hypercover(_) => "check hypercover",
            CheckCommand::Equivalence(_) => "check equivalence",
            CheckCommand::Isotropy(_) => "check isotropy",
        },
        Command::Build(b) => match b {
            BuildCommand::Nerve(_) => "build nerve",
            BuildCommand::B2group(_) => "build b2group",
            BuildCommand::Action(_) => "build action",
            BuildCommand::Action2(_) => "build action2",
            BuildCommand::Pullback { .. } => "build pullback",
            BuildCommand::Pushforward { .. } => "build pushforward",
            BuildCommand::Strictify(_) => "build strictify",
            BuildCommand::Quotient(_) => "build quotient",
            BuildCommand::Reduce(_) => "build reduce",
            BuildCommand::Cylinder { .. } => "build cylinder",
        },
        Command::Extract(e) => match e {
            ExtractCommand::Lambda(_) => "extract lambda",
            ExtractCommand::Fiber { .. } => "extract fiber",
            ExtractCommand::Invariants(_) => "extract invariants",
        },
        Command::Hom(HomCommand::Count(_)) => "hom count",
        Command::Hom(HomCommand::List { .. }) => "hom list",
        Command::Sample { .. } => "sample",
        Command::Fmt(_) => "fmt",
    };
    sub.to_string()
}

enum Failure {
    /// Exit 2.
    Usage(&'static str, String),
    /// Exit 1.
    Domain(kanfib::Error),
}

impl From<kanfib::Error> for Failure {
    fn from(e: kanfib::Error) -> Self {
        Failure::Domain(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage("Usage", msg.into())
}

/// A loaded document with the global options that shape conversions.
struct Loaded {
    doc: Document,
    depth: usize,
}

fn load(path: &Path, depth: usize) -> Run<Loaded> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage("Io", format!("{}: {e}", path.display())))?;
    let doc = parse(&text).map_err(|e| match e {
        FormatError::Parse { .. } => Failure::Usage("ParseError", e.to_string()),
        FormatError::Validation { ref source, .. } => Failure::Usage(source.kind(), e.to_string()),
    })?;
    Ok(Loaded { doc, depth })
}

impl Loaded {
    /// The named block, or the only block accepted by `accept`.
    fn pick(&self, block: &Option<String>, what: &str, accept: impl Fn(&Value) -> bool) -> Run<(String, &Value)> {
        if let Some(name) = block {
            let v = self
                .doc
                .get(name)
                .ok_or_else(|| usage(format!("no block named `{name}`")))?;
            if !accept(v) {
                return Err(usage(format!("block `{name}` is a {}, not {what}", v.kind())));
            }
            return Ok((name.clone(), v));
        }
        let found: Vec<(&str, &Value)> = self.doc.iter().filter(|(_, v)| accept(v)).collect();
        match found.as_slice() {
            [(n, v)] => Ok((n.to_string(), v)),
            [] => Err(usage(format!("no block is {what}"))),
            _ => {
                // Prefer a plain sset over values that convert to one.
                let sets: Vec<_> = found.iter().filter(|(_, v)| matches!(v, Value::Set(_))).collect();
                if let [(n, v)] = sets.as_slice() {
                    return Ok((n.to_string(), v));
                }
                let names: Vec<&str> = found.iter().map(|(n, _)| *n).collect();
                Err(usage(format!("several blocks are {what} ({}); pass --block", names.join(", "))))
            }
        }
    }

    fn set(&self, block: &Option<String>) -> Run<(String, Arc<SimplicialSet>)> {
        let (name, v) = self.pick(block, "a simplicial set", |v| {
            matches!(v, Value::Set(_) | Value::Groupoid(_) | Value::Group(_) | Value::CrossedModule(_))
        })?;
        let set = match v {
            Value::Set(s) => s.clone(),
            Value::Groupoid(g) => nerve(g, self.depth).set,
            Value::Group(g) => nerve(&FiniteGroupoid::from_group(g), self.depth).set,
            Value::CrossedModule(xm) => classifying_2group(&crossed_module_to_grouplike(xm), self.depth)?.set,
            _ => unreachable!(),
        };
        Ok((name, set))
    }

    fn map(&self, block: &Option<String>) -> Run<(String, SimplicialMap)> {
        let (name, v) = self.pick(block, "a map", |v| matches!(v, Value::Map { .. }))?;
        let Value::Map { map, .. } = v else { unreachable!() };
        Ok((name, map.clone()))
    }

    fn groupoid(&self, block: &Option<String>) -> Run<(String, FiniteGroupoid)> {
        let (name, v) = self.pick(block, "a groupoid", |v| matches!(v, Value::Groupoid(_) | Value::Group(_)))?;
        Ok((
            name,
            match v {
                Value::Groupoid(g) => g.clone(),
                Value::Group(g) => FiniteGroupoid::from_group(g),
                _ => unreachable!(),
            },
        ))
    }

    fn action(&self, block: &Option<String>) -> Run<(String, StrictAction)> {
        let (name, v) = self.pick(block, "an action", |v| matches!(v, Value::Action { .. }))?;
        let Value::Action { action, .. } = v else { unreachable!() };
        Ok((name, action.clone()))
    }

    fn bundle(&self, b: &BundleInput) -> Run<(String, FibrationBundle)> {
        let (name, pi) = self.map(&b.input.block)?;
        Ok((name, FibrationBundle::new(pi, b.n)?))
    }
}

/// Adds a bundle as sets `K`, `base`, `fiber` and maps `pi`, `incl`.
pub fn bundle_document(b: &FibrationBundle) -> Document {
    let mut doc = Document::new();
    doc.insert_set("K", b.k.clone());
    doc.insert_set("base", b.base.clone());
    doc.insert_set("fiber", b.fiber().clone());
    doc.insert_map("pi", "K", "base", b.pi.clone());
    doc.insert_map("incl", "fiber", "K", b.incl.clone());
    doc
}

fn bundle_report(r: &mut Report, b: &FibrationBundle) {
    r.field("total.levels", join(b.k.counts()));
    r.field("base.levels", join(b.base.counts()));
    r.field("fiber.levels", join(b.fiber().counts()));
    r.field("fibration.n", b.n);
    r.field("fibration.verdict", b.certificate.verdict);
    r.say(format!(
        "fibration with total space {}, base {}, fiber {}; {}",
        levels(&b.k),
        levels(&b.base),
        levels(b.fiber()),
        b.certificate.summary()
    ));
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn levels(x: &SimplicialSet) -> String {
    format!("[{}]", join(x.counts()))
}

fn parse_domain(text: &str) -> Run<SimplicialSet> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| s.parse::<usize>().map_err(|_| usage(format!("bad number `{s}` in domain `{text}`")));
    let (kind, m) = match parts.as_slice() {
        ["simplex", m] => (StandardKind::Simplex, num(m)?),
        ["boundary", m] => (StandardKind::Boundary, num(m)?),
        ["horn", m, j] => (StandardKind::Horn { j: num(j)? }, num(m)?),
        _ => return Err(usage(format!("domain `{text}` is not simplex:m, horn:m:j or boundary:m"))),
    };
    standard_complex(kind, m, m).map(|s| s.set).map_err(|e| usage(e.to_string()))
}

fn execute(cli: &Cli) -> Run<(Report, Option<Document>)> {
    let name = command_name(&cli.command);
    let depth = cli.depth;
    let open = |i: &Input| load(&i.file, depth);
    match &cli.command {
        Command::Check(c) => {
            let check = match c {
                CheckCommand::Kan { input, m, j, unique } => {
                    let (_, x) = open(input)?.set(&input.block)?;
                    let mode = if *unique { KanMode::Unique } else { KanMode::Fill };
                    check_kan(&x, *m, *j, mode).map_err(|e| usage(e.to_string()))?
                }
                CheckCommand::Ngroupoid { input, n } => {
                    let (_, x) = open(input)?.set(&input.block)?;
                    classify_n_groupoid(&x, *n)
                }
                CheckCommand::Fibration(b) => check_fibration(&open(&b.input)?.map(&b.input.block)?.1, b.n),
                CheckCommand::Hypercover(b) => check_hypercover(&open(&b.input)?.map(&b.input.block)?.1, b.n),
                CheckCommand::Equivalence(b) => check_equivalence(&open(&b.input)?.map(&b.input.block)?.1, b.n)?,
                CheckCommand::Isotropy(input) => {
                    let (_, x) = open(input)?.set(&input.block)?;
                    let mut r = is_2_isotropy_free(&x);
                    r.push_part(check_isotropy_consequences(&x));
                    r
                }
            };
            Ok((Report::of_check(name, check), None))
        }
        Command::Build(b) => build(cli, name, b),
        Command::Extract(e) => extract(cli, name, e),
        Command::Hom(h) => {
            let args = match h {
                HomCommand::Count(a) | HomCommand::List { args: a, .. } => a,
            };
            let domain = Arc::new(parse_domain(&args.domain)?);
            let (target, x) = open(&args.input)?.set(&args.input.block)?;
            if x.top() < domain.top() {
                return Err(usage(format!(
                    "target `{target}` is truncated at {}, below the domain's {}",
                    x.top(),
                    domain.top()
                )));
            }
            let mut r = Report::new(name);
            r.field("domain", &args.domain);
            r.field("target", &target);
            match h {
                HomCommand::Count(_) => {
                    let n = count_maps(&domain, &x)?;
                    r.field("count", n);
                    r.say(format!("{n} maps from {} to {target}", args.domain));
                }
                HomCommand::List { limit, .. } => {
                    let maps = enumerate_maps(&domain, &x)?;
                    r.field("count", maps.len());
                    r.say(format!("{} maps from {} to {target}", maps.len(), args.domain));
                    for (i, m) in maps.iter().take(*limit).enumerate() {
                        let top = m.tables().len() - 1;
                        r.field(format!("map.{i}"), join(m.table(top)));
                        r.say(format!("  map {i}: top cells -> {}", join(m.table(top))));
                    }
                }
            }
            Ok((r, None))
        }
        Command::Sample { kind } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let mut doc = Document::new();
            match kind {
                SampleKind::Groupoid => doc.insert("groupoid", Value::Groupoid(random_groupoid(&mut rng, 4, 12))),
                SampleKind::CrossedModule => {
                    doc.insert("xm", Value::CrossedModule(random_crossed_module(&mut rng, 8)))
                }
                SampleKind::Action => {
                    let x = random_groupoid(&mut rng, 3, 8);
                    doc.insert_action("action", random_strict_action(&mut rng, &x, 6));
                }
            }
            let mut r = Report::new(name);
            r.field("seed", cli.seed);
            Ok((r, Some(doc)))
        }
        Command::Fmt(input) => {
            let l = open(input)?;
            let mut r = Report::new(name);
            r.field("blocks", l.doc.len());
            Ok((r, Some(l.doc)))
        }
    }
}

fn build(cli: &Cli, name: String, b: &BuildCommand) -> Run<(Report, Option<Document>)> {
    let depth = cli.depth;
    let open = |i: &Input| load(&i.file, depth);
    let mut r = Report::new(name);
    let mut doc = Document::new();
    match b {
        BuildCommand::Nerve(input) => {
            let (_, g) = open(input)?.groupoid(&input.block)?;
            let nv = nerve(&g, depth).set;
            r.field("levels", join(nv.counts()));
            r.say(format!("nerve with levels {}", levels(&nv)));
            doc.insert_set("nerve", nv);
        }
        BuildCommand::B2group(input) => {
            let l = open(input)?;
            let (_, v) = l.pick(&input.block, "a crossed module", |v| matches!(v, Value::CrossedModule(_)))?;
            let Value::CrossedModule(xm) = v else { unreachable!() };
            let z = classifying_2group(&crossed_module_to_grouplike(xm), depth)?.set;
            r.field("levels", join(z.counts()));
            r.say(format!("classifying 2-group with levels {}", levels(&z)));
            doc.insert_set("b2group", z);
        }
        BuildCommand::Action(input) => {
            let (_, a) = open(input)?.action(&input.block)?;
            let bundle = strict_action_groupoid(&a, depth)?;
            bundle_report(&mut r, &bundle);
            doc = bundle_document(&bundle);
        }
        BuildCommand::Action2(input) => {
            let (_, a) = open(input)?.action(&input.block)?;
            let bundle = strict_2group_action_groupoid(&a, depth)?;
            bundle_report(&mut r, &bundle);
            doc = bundle_document(&bundle);
        }
        BuildCommand::Pullback { bundle, along } | BuildCommand::Pushforward { bundle, along } => {
            let l = open(&bundle.input)?;
            let (_, e) = l.bundle(bundle)?;
            let (_, f) = l.map(&Some(along.clone()))?;
            let out = if matches!(b, BuildCommand::Pullback { .. }) {
                pullback(&e, &f)?
            } else {
                pushforward(&e, &f)?
            };
            bundle_report(&mut r, &out);
            doc = bundle_document(&out);
        }
        BuildCommand::Strictify(input) => {
            let (_, e) = open(&input.input)?.bundle(input)?;
            let s = strictify(&e)?;
            let mut cert = s.certificate.clone();
            cert.note(format!(
                "strict action of a group of order {} on a groupoid with {} objects and {} arrows",
                s.action.group().order(),
                s.groupoid.object_count(),
                s.groupoid.arrow_count()
            ));
            r = Report::of_check(r.command, cert);
            doc.insert_set("fiber", s.map.source().clone());
            doc.insert_set("tilde", s.set.clone());
            doc.insert_map("f", "fiber", "tilde", s.map.clone());
            doc.insert_action("action", s.action.clone());
            if r.status == Status::Holds {
                r.status = Status::Ok;
            }
        }
        BuildCommand::Quotient(input) => {
            let (_, a) = open(input)?.action(&input.block)?;
            let q = free_quotient(&a, depth)?;
            r.field("objects", q.groupoid.object_count());
            r.field("arrows", q.groupoid.arrow_count());
            r.field("hypercover.verdict", q.certificate.verdict);
            r.say(format!(
                "orbit groupoid with {} objects and {} arrows; {}",
                q.groupoid.object_count(),
                q.groupoid.arrow_count(),
                q.certificate.summary()
            ));
            doc.insert("quotient", Value::Groupoid(q.groupoid.clone()));
            doc.insert_set("K", q.projection.source().clone());
            doc.insert_set("Q", q.projection.target().clone());
            doc.insert_map("projection", "K", "Q", q.projection.clone());
        }
        BuildCommand::Reduce(input) => {
            let (_, z) = open(input)?.set(&input.block)?;
            let red = reduce_to_1(&z)?;
            r.field("objects", red.groupoid.object_count());
            r.field("arrows", red.groupoid.arrow_count());
            r.field("hypercover.verdict", red.certificate.verdict);
            r.say(format!(
                "1-groupoid with {} objects and {} arrows; {}",
                red.groupoid.object_count(),
                red.groupoid.arrow_count(),
                red.certificate.summary()
            ));
            doc.insert("groupoid", Value::Groupoid(red.groupoid.clone()));
            doc.insert_set("Z", red.map.source().clone());
            doc.insert_set("nerve", red.map.target().clone());
            doc.insert_map("f", "Z", "nerve", red.map.clone());
        }
        BuildCommand::Cylinder { input, k } => {
            let (_, x) = open(input)?.set(&input.block)?;
            let top = depth.min(x.top());
            let c = cylinder(&x, *k, top)?;
            r.field("levels", join(c.set.counts()));
            r.say(format!("cylinder X^[{k}] with levels {}", levels(&c.set)));
            doc.insert_set("cylinder", c.set.clone());
        }
    }
    Ok((r, Some(doc)))
}

fn extract(cli: &Cli, name: String, e: &ExtractCommand) -> Run<(Report, Option<Document>)> {
    let open = |i: &Input| load(&i.file, cli.depth);
    let mut r = Report::new(name);
    match e {
        ExtractCommand::Lambda(input) => {
            let (_, b) = open(&input.input)?.bundle(input)?;
            let d = lambda_extract(&b)?;
            r.field("fiber.objects", d.fiber.object_count());
            r.field("fiber.arrows", d.fiber.arrow_count());
            r.field("spans", d.spans.len());
            r.say(format!(
                "fiber groupoid with {} objects and {} arrows; {} spans",
                d.fiber.object_count(),
                d.fiber.arrow_count(),
                d.spans.len()
            ));
            let mut doc = Document::new();
            doc.insert("fiber", Value::Groupoid(d.fiber.clone()));
            for s in &d.spans {
                let key = format!("span.{}", s.g);
                r.field(format!("{key}.objects"), s.groupoid.object_count());
                r.field(format!("{key}.arrows"), s.groupoid.arrow_count());
                r.field(format!("{key}.left"), join(&s.left.objects));
                r.field(format!("{key}.right"), join(&s.right.objects));
                doc.insert(format!("span_{}", s.g), Value::Groupoid(s.groupoid.clone()));
            }
            let entries: usize = d.transports.iter().map(|t| t.entries.len()).sum();
            r.field("transports", d.transports.len());
            r.field("transport.entries", entries);
            Ok((r, Some(doc)))
        }
        ExtractCommand::Fiber { input, vertex } => {
            let l = open(input)?;
            let (pi_name, pi) = l.map(&input.block)?;
            let Some(Value::Map { from, .. }) = l.doc.get(&pi_name) else { unreachable!() };
            let incl = fiber(&pi, *vertex).map_err(|e| usage(e.to_string()))?;
            r.field("vertex", vertex);
            r.field("levels", join(incl.source().counts()));
            r.say(format!("fiber over vertex {vertex} with levels {}", levels(incl.source())));
            let mut doc = Document::new();
            doc.insert_set(from, pi.source().clone());
            doc.insert_set("fiber", incl.source().clone());
            doc.insert_map("incl", "fiber", from, incl);
            Ok((r, Some(doc)))
        }
        ExtractCommand::Invariants(input) => {
            let (_, b) = open(&input.input)?.bundle(input)?;
            let inv = invariant_objects(&b)?;
            r.field("count", inv.len());
            r.field("objects", join(&inv));
            r.say(format!("{} invariant fiber objects: [{}]", inv.len(), join(&inv)));
            Ok((r, None))
        }
    }
}
