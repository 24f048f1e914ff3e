//! Command-line front end. [`run`] takes the argument list and output
//! streams so tests can drive it in-process.
//!
//! Exit codes: 0 on success, 2 when the input is rejected (bad syntax, bad
//! graph, unmet precondition, colouring that fails validation), 1 on an
//! internal error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::catalog::{builtin, parse_orientation_records, parse_pd, parse_vog, write_vog, Builtin};
use crate::engine::o_colour;
use crate::error::Error;
use crate::graph::Graph;
use crate::ocycle::{check_o_colouring, chi_o, cycle_usage, densify, enumerate_decompositions, min_colours};
use crate::orientation::OrientationAssignment;
use crate::symmetry::{act, automorphisms, encode, orbits, MapKind};
use crate::transforms::{perfect_matchings, tait_contract, tait_expand, three_edge_colourings, CubicGraph};

#[derive(Parser, Debug)]
#[command(name = "ochroma", version, about = "O-cycles and o-colourings of vertex-oriented 4-regular plane graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output layout.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for orientation and matching sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "source")]
struct Source {
    /// Name of a catalogue graph.
    #[arg(long)]
    builtin: Option<String>,
    /// Graph in vog format.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Planar-diagram code, inline or as a file path.
    #[arg(long)]
    pd: Option<String>,
}

#[derive(Args, Debug)]
struct Input {
    #[command(flatten)]
    source: Source,
    /// Named catalogue orientation, file of `o` records, or bitmask with
    /// vertex 0 in the lowest bit.
    #[arg(long)]
    orientation: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Direction {
    Expand,
    Contract,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List o-cycles, decompositions and the o-chromatic number.
    Analyze {
        #[command(flatten)]
        input: Input,
        /// Write a colouring with the fewest colours to this file.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Orbits of orientation assignments under the map's symmetries.
    Orbits {
        #[command(flatten)]
        input: Input,
    },
    /// Expand every vertex into an edge, or contract a 1-factor of a cubic graph.
    Tait {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Direction::Expand)]
        direction: Direction,
        /// Index into the perfect matchings of the cubic input (contract only).
        #[arg(long, default_value_t = 0)]
        matching: usize,
    },
    /// Colour by reduction and print the reduction trace.
    Engine {
        #[command(flatten)]
        input: Input,
        /// Write the engine's colouring to this file.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// For each 1-factor of a cubic graph, whether its contraction is o-colourable.
    SnarkScan {
        #[command(flatten)]
        input: Input,
    },
    /// Check an edge colouring file against a graph and orientation.
    Validate {
        #[command(flatten)]
        input: Input,
        /// Whitespace-separated colour per edge, `#` comments allowed.
        #[arg(long)]
        colouring: PathBuf,
    },
}

/// Failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure { code: if e.is_input_error() { 2 } else { 1 }, message: e.to_string() }
    }
}

fn rejected(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn internal(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(internal(e.to_string())),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                1
            }
        },
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome<String> {
    let tsv = cli.format == Format::Tsv;
    match &cli.command {
        Command::Analyze { input, witness } => analyze(input, witness.as_deref(), tsv),
        Command::Orbits { input } => orbit_report(input, tsv),
        Command::Tait { input, direction, matching } => tait(input, *direction, *matching),
        Command::Engine { input, witness } => engine(input, witness.as_deref(), tsv),
        Command::SnarkScan { input } => snark_scan(input, tsv),
        Command::Validate { input, colouring } => validate(input, colouring),
    }
}

struct Loaded {
    graph: Graph,
    builtin: Option<Builtin>,
    /// Orientation written in the input file, if any.
    written: Option<OrientationAssignment>,
}

fn read(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| rejected(format!("{}: {e}", path.display())))
}

fn load(input: &Input) -> Outcome<Loaded> {
    let s = &input.source;
    if let Some(name) = &s.builtin {
        let b = builtin(name)?;
        return Ok(Loaded { graph: b.graph.clone(), builtin: Some(b), written: None });
    }
    if let Some(path) = &s.file {
        let doc = parse_vog(&read(path)?)?;
        return Ok(Loaded { graph: doc.graph, builtin: None, written: doc.orientation });
    }
    let code = s.pd.as_deref().expect("clap requires one source");
    let text = if Path::new(code).is_file() { read(Path::new(code))? } else { code.to_string() };
    Ok(Loaded { graph: parse_pd(&text)?, builtin: None, written: None })
}

/// Orientation chosen by `--orientation`, else the one in the input, else
/// the catalogue default, else index 0 at every vertex.
fn orientation(input: &Input, l: &Loaded) -> Outcome<OrientationAssignment> {
    let n = l.graph.vertex_count();
    let Some(sel) = &input.orientation else {
        if let Some(w) = &l.written {
            return Ok(w.clone());
        }
        if let Some(b) = &l.builtin {
            return Ok(b.orientations[0].1.clone());
        }
        return Ok(OrientationAssignment::zeros(n));
    };
    if let Some(b) = &l.builtin {
        if let Ok(s) = b.orientation(sel) {
            return Ok(s.clone());
        }
    }
    let sigma = if let Ok(mask) = sel.parse::<u64>() {
        if n < 64 && mask >> n != 0 {
            return Err(rejected(format!("mask {mask} has bits beyond vertex {}", n.saturating_sub(1))));
        }
        OrientationAssignment::from_mask(n, mask)
    } else if Path::new(sel).is_file() {
        parse_orientation_records(&l.graph, &read(Path::new(sel))?)?
    } else {
        return Err(Error::UnknownName(sel.clone()).into());
    };
    sigma.cells(&l.graph)?;
    Ok(sigma)
}

fn digits(s: &OrientationAssignment) -> String {
    s.choice.iter().map(|c| char::from(b'0' + *c)).collect()
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>, sep: &str) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn write_colouring(path: &Path, g: &Graph, colours: &[usize]) -> Outcome<()> {
    let text = format!("# {} edges, colour per edge in edge order\n{}\n", g.edge_count(), join(colours, " "));
    std::fs::write(path, text).map_err(|e| rejected(format!("{}: {e}", path.display())))
}

fn analyze(input: &Input, witness: Option<&Path>, tsv: bool) -> Outcome<String> {
    let l = load(input)?;
    let g = &l.graph;
    let sigma = orientation(input, &l)?;
    let (cycles, decs) = enumerate_decompositions(g, &sigma)?;
    let usage = cycle_usage(cycles.len(), &decs);
    let colours: Vec<usize> = decs.iter().map(|d| min_colours(&cycles, d).0).collect();
    let chi = colours.iter().min().copied();
    let mut o = String::new();
    if tsv {
        let _ = writeln!(o, "graph\t{}\t{}\t{}", g.vertex_count(), g.edge_count(), digits(&sigma));
        for (i, c) in cycles.iter().enumerate() {
            let parts = join(usage[i].iter().map(|d| d + 1), ",");
            let _ = writeln!(o, "cycle\t{}\t{}\t{}\t{}", i + 1, c.label(1), c.len(), parts);
        }
        for (i, d) in decs.iter().enumerate() {
            let _ =
                writeln!(o, "decomposition\t{}\t{}\t{}", i + 1, join(d.cycles.iter().map(|c| c + 1), ","), colours[i]);
        }
        let _ = writeln!(o, "chi_o\t{}", chi.map_or("none".to_string(), |k| k.to_string()));
    } else {
        let _ = writeln!(o, "vertices {}  edges {}  orientation {}", g.vertex_count(), g.edge_count(), digits(&sigma));
        let _ = writeln!(o, "o-cycles {}", cycles.len());
        let width = cycles.iter().map(|c| c.label(1).len()).max().unwrap_or(0);
        for (i, c) in cycles.iter().enumerate() {
            let parts = if usage[i].is_empty() { "-".to_string() } else { join(usage[i].iter().map(|d| d + 1), " ") };
            let _ = writeln!(o, "  c{:<3} {:<width$}  length {}  in {}", i + 1, c.label(1), c.len(), parts);
        }
        let _ = writeln!(o, "decompositions {}", decs.len());
        for (i, d) in decs.iter().enumerate() {
            let members = join(d.cycles.iter().map(|c| format!("c{}", c + 1)), " ");
            let _ = writeln!(o, "  d{:<3} {}  colours {}", i + 1, members, colours[i]);
        }
        let _ = writeln!(o, "chi_o {}", chi.map_or("none (not o-colourable)".to_string(), |k| k.to_string()));
    }
    if let Some(path) = witness {
        let (_, c) = chi_o(g, &sigma)?;
        write_colouring(path, g, &c.edge_colours(g))?;
    }
    Ok(o)
}

fn orbit_report(input: &Input, tsv: bool) -> Outcome<String> {
    let l = load(input)?;
    let g = &l.graph;
    let report = orbits(g)?;
    let rows: Vec<(usize, usize, Option<usize>)> = report
        .orbits
        .par_iter()
        .map(|orb| {
            let (c, d) = enumerate_decompositions(g, &orb.representative)?;
            let chi = d.iter().map(|x| min_colours(&c, x).0).min();
            Ok((c.len(), d.len(), chi))
        })
        .collect::<crate::Result<_>>()?;
    // Catalogue orientations, placed in their orbits.
    let acting: Vec<_> = automorphisms(g).into_iter().filter(|a| a.kind(g) != MapKind::Incompatible).collect();
    let mut names = vec![Vec::new(); report.orbits.len()];
    if let Some(b) = &l.builtin {
        for (name, s) in &b.orientations {
            let mut least = usize::MAX;
            for a in &acting {
                least = least.min(encode(g, &act(g, a, s)?));
            }
            if let Some(i) = report.orbits.iter().position(|o| o.code == least) {
                names[i].push(*name);
            }
        }
    }
    let burnside = report.burnside().map_or("n/a".to_string(), |k| k.to_string());
    let mut o = String::new();
    if tsv {
        let _ = writeln!(o, "group\t{}\t{}", report.group_order, report.acting);
        for (i, orb) in report.orbits.iter().enumerate() {
            let (c, d, chi) = rows[i];
            let chi = chi.map_or("none".to_string(), |k| k.to_string());
            let _ = writeln!(
                o,
                "orbit\t{}\t{}\t{}\t{c}\t{d}\t{chi}\t{}",
                i + 1,
                digits(&orb.representative),
                orb.size,
                join(&names[i], ",")
            );
        }
        let _ = writeln!(o, "burnside\t{burnside}");
    } else {
        let _ = writeln!(o, "{} orbits (group order {})", report.orbits.len(), report.group_order);
        let _ = writeln!(o, "automorphisms keeping the rotation system up to reversal: {}", report.acting);
        for (i, orb) in report.orbits.iter().enumerate() {
            let (c, d, chi) = rows[i];
            let chi = chi.map_or("none".to_string(), |k| k.to_string());
            let mut line = format!(
                "  orbit {}  representative {}  size {}  o-cycles {c}  decompositions {d}  chi_o {chi}",
                i + 1,
                digits(&orb.representative),
                orb.size
            );
            if !names[i].is_empty() {
                let _ = write!(line, "  named {}", join(&names[i], ","));
            }
            let _ = writeln!(o, "{line}");
        }
        let _ = writeln!(o, "burnside count {burnside}");
    }
    Ok(o)
}

fn tait(input: &Input, direction: Direction, matching: usize) -> Outcome<String> {
    let l = load(input)?;
    let g = &l.graph;
    match direction {
        Direction::Expand => {
            if g.degree() != 4 {
                return Err(rejected("expansion needs a 4-regular graph"));
            }
            let sigma = orientation(input, &l)?;
            let (h, f) = tait_expand(g, &sigma)?;
            Ok(format!("# 1-factor {}\n{}", join(&f, " "), write_vog(h.graph(), None)))
        }
        Direction::Contract => {
            if g.degree() != 3 {
                return Err(rejected("contraction needs a cubic graph"));
            }
            let h = CubicGraph(g.clone());
            let all = perfect_matchings(&h);
            let f = all
                .get(matching)
                .ok_or_else(|| rejected(format!("matching {matching} requested, graph has {}", all.len())))?;
            let c = tait_contract(&h, f)?;
            Ok(format!(
                "# 1-factor {} of {}: {}\n{}",
                matching,
                all.len(),
                join(f, " "),
                write_vog(&c.graph, Some(&c.sigma))
            ))
        }
    }
}

fn engine(input: &Input, witness: Option<&Path>, tsv: bool) -> Outcome<String> {
    let l = load(input)?;
    let g = &l.graph;
    let sigma = orientation(input, &l)?;
    let (colouring, trace) = o_colour(g, &sigma)?;
    // Report colours as 0..k in order of first use.
    let colours = densify(&colouring.edge_colours(g));
    check_o_colouring(g, &sigma, &colours)
        .map_err(|e| internal(format!("engine produced an invalid colouring: {e}")))?;
    let mut o = String::new();
    if tsv {
        let _ = writeln!(o, "palette\t{}", colouring.palette);
        for (e, c) in colours.iter().enumerate() {
            let _ = writeln!(o, "edge\t{e}\t{c}");
        }
        for s in &trace.steps {
            let _ = writeln!(o, "step\t{}\t{}\t{}\t{}\t{}", s.depth, s.tag, s.pivot, s.palette, u8::from(s.new_colour));
        }
        let _ = writeln!(o, "fallbacks\t{}", trace.fallbacks());
    } else {
        let _ = writeln!(o, "orientation {}", digits(&sigma));
        let _ = writeln!(o, "palette {}", colouring.palette);
        let _ = writeln!(o, "colours {}", join(&colours, " "));
        let _ = writeln!(o, "o-cycles {}", colouring.cycles.len());
        for c in &colouring.cycles {
            let _ = writeln!(o, "  {}  colour {}", c.label(1), colours[c.edges()[0]]);
        }
        let _ = writeln!(o, "trace");
        for line in trace.to_string().lines() {
            let _ = writeln!(o, "  {line}");
        }
        let _ = writeln!(o, "fallbacks {}  new-colour steps {}", trace.fallbacks(), trace.new_colour_events());
    }
    if let Some(path) = witness {
        write_colouring(path, g, &colours)?;
    }
    Ok(o)
}

fn snark_scan(input: &Input, tsv: bool) -> Outcome<String> {
    let l = load(input)?;
    let g = &l.graph;
    if g.degree() != 3 {
        return Err(rejected("snark-scan needs a cubic graph"));
    }
    let h = CubicGraph(g.clone());
    let all = perfect_matchings(&h);
    let verdicts: Vec<(String, bool)> = all
        .par_iter()
        .map(|f| {
            let c = tait_contract(&h, f)?;
            let colourable = chi_o(&c.graph, &c.sigma).is_ok();
            Ok((digits(&c.sigma), colourable))
        })
        .collect::<crate::Result<_>>()?;
    let tec = three_edge_colourings(&h).len();
    let bad = verdicts.iter().filter(|(_, ok)| !ok).count();
    let mut o = String::new();
    if tsv {
        for (i, (f, (s, ok))) in all.iter().zip(&verdicts).enumerate() {
            let _ = writeln!(o, "matching\t{i}\t{}\t{s}\t{}", join(f, ","), if *ok { "yes" } else { "no" });
        }
        let _ = writeln!(o, "summary\t{}\t{bad}\t{tec}", all.len());
    } else {
        let _ = writeln!(o, "perfect matchings {}", all.len());
        for (i, (f, (s, ok))) in all.iter().zip(&verdicts).enumerate() {
            let verdict = if *ok { "o-colourable" } else { "not o-colourable" };
            let _ = writeln!(o, "  matching {i}  edges {}  orientation {s}  {verdict}", join(f, " "));
        }
        let _ = writeln!(o, "1-factors with a non-o-colourable contraction {bad} of {}", all.len());
        let _ = writeln!(o, "proper 3-edge-colourings {tec}");
    }
    Ok(o)
}

fn validate(input: &Input, path: &Path) -> Outcome<String> {
    let l = load(input)?;
    let g = &l.graph;
    let sigma = orientation(input, &l)?;
    let text = read(path)?;
    let mut colours = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        for field in content.split_whitespace() {
            let c = field.parse::<usize>().map_err(|_| {
                Failure::from(Error::Syntax { line: i + 1, message: format!("expected a colour, found {field:?}") })
            })?;
            colours.push(c);
        }
    }
    match check_o_colouring(g, &sigma, &colours) {
        Ok(()) => {
            let k = colours.iter().collect::<std::collections::BTreeSet<_>>().len();
            Ok(format!("valid o-colouring with {k} colours\n"))
        }
        Err(reason) => Err(rejected(format!("invalid o-colouring: {reason}"))),
    }
}
