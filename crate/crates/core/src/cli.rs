//! The `germkit` command line.
//!
//! Exit codes: 0 on success, 1 for invalid input, 2 when a mathematical
//! invariant fails (a positivity check, an oracle disagreement).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bigint_serde;
use crate::cosets::{count_at_depth, SubgroupFamily, SubgroupSpec};
use crate::error::{Error, Result};
use crate::germ::{
    induce_maps, jl_transfer, lj_transfer, solve_from_multiplicities, whittaker_dims, BaseCounts, CoefficientMap,
    MultiplicityMatrix,
};
use crate::gl2::{catalog, CatalogRow};
use crate::oracle::{
    build_a_lambda, count_nilpotent, count_parabolic_cosets, gl_order, multiplicity_matrix, nilpotent_partition,
    oracle_cap,
};
use crate::partition::{enumerate_partitions, Dominance, Partition};
use crate::qpoly::q_multinomial;

#[derive(Parser, Debug)]
#[command(name = "germkit", version, about = "Exact germ-expansion combinatorics for GL_n(D)")]
struct Cli {
    /// Emit JSON instead of a text table.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the partitions of n in lexicographically decreasing order.
    Partitions {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Show::All)]
        show: Show,
    },
    /// q-multinomials [n]_q! / ∏ [λ_i]_q!, optionally evaluated at q^d.
    Qcount {
        #[arg(long)]
        n: Option<usize>,
        /// A single partition such as 2,1 (defaults to every partition of n).
        #[arg(long)]
        partition: Option<Partition>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 1)]
        d: u32,
    },
    /// Double-coset counts |P_λ\G/K| across subgroup families and depths.
    Cosets {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        d: u32,
        /// Largest depth to tabulate for the pro-p families.
        #[arg(long, default_value_t = 0)]
        j: u32,
        /// Restrict to one family: K0, K, I0, Ihalf or I.
        #[arg(long)]
        family: Option<SubgroupFamily>,
    },
    /// Operations on germ-coefficient maps.
    #[command(subcommand)]
    Germ(GermCommand),
    /// Brute-force checks over F_q.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum)]
        check: Check,
    },
    /// The GL_2 catalog.
    #[command(subcommand)]
    Gl2(Gl2Command),
}

#[derive(Subcommand, Debug)]
enum GermCommand {
    /// Dimension polynomial P(X) of a coefficient map.
    Dimpoly {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, default_value = "K")]
        family: SubgroupFamily,
        /// Base counts for a subgroup outside the named families.
        #[arg(long, value_name = "FILE", conflicts_with = "family")]
        counts: Option<PathBuf>,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        d: u32,
        /// Also tabulate P(t^j) for depths 0..=j.
        #[arg(long)]
        j: Option<u32>,
    },
    /// Coefficient map of a parabolic induction; pass --in once per factor.
    Induce {
        #[arg(long = "in", value_name = "FILE", required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Transfer from GL_{dn}(F) to GL_n(D).
    Lj {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Transfer from GL_n(D) to GL_{dn}(F).
    Jl {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        d: usize,
    },
    /// Recover a coefficient map from the multiplicities m(ξ_λ, π).
    Solve {
        #[command(flatten)]
        input: InputArg,
        /// Compute the multiplicity matrix by brute force over F_q.
        #[arg(long, required_unless_present = "matrix")]
        q: Option<u64>,
        /// Read the multiplicity matrix from FILE instead.
        #[arg(long, value_name = "FILE", conflicts_with = "q")]
        matrix: Option<PathBuf>,
    },
    /// Degenerate Whittaker dimensions at the minimal support.
    Whittaker {
        #[command(flatten)]
        input: InputArg,
    },
}

#[derive(Args, Debug)]
struct InputArg {
    /// Coefficient map in JSON; `-` reads stdin.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Gl2Command {
    /// Fixed-vector dimensions for every class along the three chains.
    Table {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        d: u32,
        /// Largest depth to tabulate.
        #[arg(long, default_value_t = 2)]
        j: u32,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Show {
    All,
    D,
    Dual,
    Dominance,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Cosets,
    Jordan,
    Ximatrix,
}

/// Result of a command: text and JSON renderings, plus whether an invariant
/// reported by the command itself failed.
struct Output {
    text: String,
    json: Value,
    pass: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, pass: true }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = execute(&cli).and_then(|out| {
        emit(&cli, &out, stdout)?;
        Ok(out.pass)
    });
    let code = match result {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_invariant_violation() {
                2
            } else {
                1
            }
        }
    };
    let _ = stdout.flush();
    code
}

fn emit(cli: &Cli, out: &Output, stdout: &mut dyn Write) -> Result<()> {
    let mut body = if cli.json {
        serde_json::to_string_pretty(&out.json)?
    } else {
        out.text.trim_end().to_string()
    };
    body.push('\n');
    match &cli.out {
        Some(path) => fs::write(path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => Ok(stdout.write_all(body.as_bytes())?),
    }
}

fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Partitions { n, show } => partitions(*n, *show),
        Command::Qcount { n, partition, q, d } => qcount(*n, partition.as_ref(), *q, *d),
        Command::Cosets { n, q, d, j, family } => cosets(*n, *q, *d, *j, *family),
        Command::Germ(cmd) => germ(cmd),
        Command::Oracle { n, q, check } => oracle(*n, *q, *check),
        Command::Gl2(Gl2Command::Table { q, d, j }) => gl2_table(*q, *d, *j),
    }
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let width = |s: &str| s.chars().count();
    let mut widths: Vec<usize> = header.iter().map(|h| width(h)).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(width(cell));
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - width(c))))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = vec![line(header.to_vec())];
    out.extend(rows.iter().map(|r| line(r.iter().map(String::as_str).collect())));
    out.join("\n")
}

fn partitions(n: usize, show: Show) -> Result<Output> {
    let all = enumerate_partitions(n)?;
    if show == Show::Dominance {
        let symbol = |a: &Partition, b: &Partition| -> Result<&'static str> {
            Ok(match a.dominance(b)? {
                Dominance::Less => "<",
                Dominance::Equal => "=",
                Dominance::Greater => ">",
                Dominance::Incomparable => "|",
            })
        };
        let mut rows = Vec::new();
        let mut relation = Vec::new();
        for a in &all {
            let cells = all.iter().map(|b| symbol(a, b).map(str::to_string)).collect::<Result<Vec<_>>>()?;
            relation.push(cells.clone());
            rows.push(std::iter::once(a.to_string()).chain(cells).collect());
        }
        let labels: Vec<String> = (1..=all.len()).map(|i| i.to_string()).collect();
        let mut header = vec!["row vs column"];
        header.extend(labels.iter().map(String::as_str));
        let text = table(&header, &rows);
        return Ok(Output::ok(text, json!({ "n": n, "partitions": all, "relation": relation })));
    }
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for p in &all {
        let mut row = vec![p.to_string()];
        let mut entry = serde_json::Map::new();
        entry.insert("partition".into(), json!(p));
        if matches!(show, Show::All | Show::D) {
            row.push(p.d().to_string());
            entry.insert("d".into(), json!(p.d()));
        }
        if matches!(show, Show::All | Show::Dual) {
            row.push(p.dual().to_string());
            entry.insert("dual".into(), json!(p.dual()));
        }
        rows.push(row);
        entries.push(Value::Object(entry));
    }
    let header: &[&str] = match show {
        Show::D => &["partition", "d"],
        Show::Dual => &["partition", "dual"],
        _ => &["partition", "d", "dual"],
    };
    Ok(Output::ok(table(header, &rows), Value::Array(entries)))
}

fn qcount(n: Option<usize>, partition: Option<&Partition>, q: Option<u64>, d: u32) -> Result<Output> {
    let list = match (n, partition) {
        (_, Some(p)) => {
            if n.is_some_and(|n| n != p.n()) {
                return Err(Error::SizeMismatch { left: n.unwrap_or(0), right: p.n() });
            }
            vec![p.clone()]
        }
        (Some(n), None) => enumerate_partitions(n)?,
        (None, None) => return Err(Error::InvalidParameter("give --n or --partition".into())),
    };
    let t = match q {
        Some(q) => {
            crate::cosets::check_q_d(q, d)?;
            Some(BigInt::from(q).pow(d))
        }
        None => None,
    };
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for p in &list {
        let poly = q_multinomial(p)?;
        let value = t.as_ref().map(|t| poly.eval(t));
        let mut row = vec![p.to_string(), poly.display_desc("q")];
        if let Some(v) = &value {
            row.push(v.to_string());
        }
        rows.push(row);
        entries.push(json!({
            "partition": p,
            "poly": poly,
            "display": poly.display_desc("q"),
            "value": value.as_ref().map(bigint_serde::to_number),
        }));
    }
    let value_header = q.map(|q| if d == 1 { format!("at q={q}") } else { format!("at q^d={q}^{d}") });
    let mut header = vec!["partition", "q-multinomial"];
    if let Some(h) = &value_header {
        header.push(h);
    }
    Ok(Output::ok(table(&header, &rows), Value::Array(entries)))
}

#[derive(Serialize)]
struct CosetRow {
    partition: Partition,
    family: SubgroupFamily,
    depth: u32,
    q: u64,
    d: u32,
    #[serde(with = "bigint_serde")]
    count: BigInt,
}

fn cosets(n: usize, q: u64, d: u32, j: u32, family: Option<SubgroupFamily>) -> Result<Output> {
    let families: Vec<SubgroupFamily> = match family {
        Some(f) => vec![f],
        None => SubgroupFamily::ALL.to_vec(),
    };
    let all = enumerate_partitions(n)?;
    let mut rows = Vec::new();
    let mut text_rows = Vec::new();
    for lambda in &all {
        for &fam in &families {
            let max_depth = if fam.is_parahoric() { 0 } else { j };
            for depth in 0..=max_depth {
                let spec = SubgroupSpec::new(fam, depth, q, d)?;
                let count = count_at_depth(lambda, &spec)?;
                text_rows.push(vec![
                    lambda.to_string(),
                    fam.name().to_string(),
                    fam.member_symbol(depth),
                    count.to_string(),
                ]);
                rows.push(CosetRow { partition: lambda.clone(), family: fam, depth, q, d, count });
            }
        }
    }
    let text = table(&["partition", "family", "member", "count"], &text_rows);
    Ok(Output::ok(text, serde_json::to_value(rows)?))
}

fn read_input(path: &Path) -> Result<String> {
    let mut s = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut s)?;
    } else {
        s = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(s)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn map_output(c: &CoefficientMap) -> Result<Output> {
    let rows: Vec<Vec<String>> = c.iter().map(|(l, v)| vec![l.to_string(), v.to_string()]).collect();
    let text = if rows.is_empty() { format!("zero map on partitions of {}", c.n()) } else { table(&["partition", "value"], &rows) };
    Ok(Output::ok(text, serde_json::to_value(c)?))
}

#[derive(Deserialize)]
struct CountEntry {
    partition: Partition,
    #[serde(with = "bigint_serde")]
    count: BigInt,
}

fn germ(cmd: &GermCommand) -> Result<Output> {
    match cmd {
        GermCommand::Dimpoly { input, family, counts, q, d, j } => {
            let c: CoefficientMap = read_json(&input.input)?;
            let base = match counts {
                Some(path) => {
                    let entries: Vec<CountEntry> = read_json(path)?;
                    BaseCounts::Custom(entries.into_iter().map(|e| (e.partition, e.count)).collect::<BTreeMap<_, _>>())
                }
                None => BaseCounts::Family(*family),
            };
            let poly = c.dimension_polynomial(&base, *q, *d)?;
            let display = poly.poly.display_asc("X");
            let mut text = display.clone();
            let degree = poly.actual_degree();
            if degree != Some(poly.formal_degree) {
                let shown = degree.map_or("-∞".to_string(), |k| k.to_string());
                text.push_str(&format!("\nnote: top coefficient cancels; degree {shown} < {}", poly.formal_degree));
            }
            let mut values = Vec::new();
            if let Some(max_j) = j {
                let rows: Vec<Vec<String>> = (0..=*max_j)
                    .map(|k| {
                        let v = poly.eval_at_depth(k);
                        values.push(bigint_serde::to_number(&v));
                        let member = poly.family.map_or(format!("+{k}"), |f| f.member_symbol(k));
                        vec![k.to_string(), member, v.to_string()]
                    })
                    .collect();
                text.push_str("\n\n");
                text.push_str(&table(&["j", "subgroup", "dim"], &rows));
            }
            let json = json!({
                "poly": poly.poly,
                "display": display,
                "q": q,
                "d": d,
                "family": poly.family,
                "formal_degree": poly.formal_degree,
                "degree": degree,
                "values": j.map(|_| values),
            });
            Ok(Output::ok(text, json))
        }
        GermCommand::Induce { inputs } => {
            let maps = inputs.iter().map(|p| read_json(p)).collect::<Result<Vec<CoefficientMap>>>()?;
            map_output(&induce_maps(&maps)?)
        }
        GermCommand::Lj { input, n, d } => map_output(&lj_transfer(&read_json(&input.input)?, *n, *d)?),
        GermCommand::Jl { input, d } => map_output(&jl_transfer(&read_json(&input.input)?, *d)?),
        GermCommand::Solve { input, q, matrix } => {
            let m: CoefficientMap = read_json(&input.input)?;
            let matrix: MultiplicityMatrix = match (q, matrix) {
                (_, Some(path)) => read_json(path)?,
                (Some(q), None) => multiplicity_matrix(m.n(), *q)?,
                (None, None) => return Err(Error::InvalidParameter("give --q or --matrix".into())),
            };
            map_output(&solve_from_multiplicities(&m, &matrix)?)
        }
        GermCommand::Whittaker { input } => {
            let c: CoefficientMap = read_json(&input.input)?;
            let dims = whittaker_dims(&c)?;
            let rows: Vec<Vec<String>> = dims.iter().map(|(l, v)| vec![l.to_string(), v.to_string()]).collect();
            let json: Vec<Value> = dims
                .iter()
                .map(|(l, v)| json!({ "partition": l, "dim": bigint_serde::to_number(v) }))
                .collect();
            Ok(Output::ok(table(&["partition", "dim"], &rows), Value::Array(json)))
        }
    }
}

fn oracle(n: usize, q: u64, check: Check) -> Result<Output> {
    let all = enumerate_partitions(n)?;
    match check {
        Check::Cosets => {
            let mut expected = Vec::new();
            let mut observed = Vec::new();
            let mut rows = Vec::new();
            for lambda in &all {
                let e = q_multinomial(lambda)?.eval_u64(q);
                let o = count_parabolic_cosets(lambda, q)?.orbit_count;
                rows.push(vec![lambda.to_string(), e.to_string(), o.to_string(), mark(e == o).into()]);
                expected.push(e);
                observed.push(o);
            }
            let pass = expected == observed;
            let text = format!(
                "{}\n\nGL_{n}(F_{q}) has {} elements; {}",
                table(&["partition", "expected", "observed", ""], &rows),
                gl_order(n, q),
                verdict(pass)
            );
            let json = json!({
                "check": "cosets", "n": n, "q": q, "partitions": all,
                "expected": numbers(&expected), "observed": numbers(&observed), "pass": pass,
            });
            Ok(Output { text, json, pass })
        }
        Check::Jordan => {
            let mut observed = Vec::new();
            let mut rows = Vec::new();
            for lambda in &all {
                let got = nilpotent_partition(&build_a_lambda(lambda, q)?)?;
                rows.push(vec![lambda.to_string(), got.to_string(), mark(&got == lambda).into()]);
                observed.push(got);
            }
            let mut pass = observed == all;
            let mut text = table(&["A_λ for", "Jordan type", ""], &rows);
            let nilpotent = match count_nilpotent(n, q) {
                Ok(c) => Some(c),
                Err(Error::OracleBound { .. }) => None,
                Err(e) => return Err(e),
            };
            match &nilpotent {
                Some(c) => {
                    pass &= c.expected == c.observed;
                    text.push_str(&format!(
                        "\n\nnilpotent matrices in M_{n}(F_{q}): expected {}, observed {}",
                        c.expected, c.observed
                    ));
                }
                None => text.push_str(&format!(
                    "\n\nnilpotent count skipped: {q}^{} matrices exceed the cap of {}",
                    n * n,
                    oracle_cap()?
                )),
            }
            text.push_str(&format!("\n{}", verdict(pass)));
            let count = |f: fn(&crate::oracle::NilpotentCount) -> &BigInt| {
                nilpotent.as_ref().map(|c| bigint_serde::to_number(f(c)))
            };
            let json = json!({
                "check": "jordan", "n": n, "q": q,
                "expected": { "types": all, "nilpotent_count": count(|c| &c.expected) },
                "observed": { "types": observed, "nilpotent_count": count(|c| &c.observed) },
                "pass": pass,
            });
            Ok(Output { text, json, pass })
        }
        Check::Ximatrix => {
            let m = multiplicity_matrix(n, q)?;
            let unitriangular = m.check_unitriangular();
            let pass = unitriangular.is_ok();
            let rows: Vec<Vec<String>> = m
                .partitions()
                .iter()
                .zip(m.rows())
                .map(|(l, r)| std::iter::once(l.to_string()).chain(r.iter().map(u64::to_string)).collect())
                .collect();
            let labels: Vec<String> = m.partitions().iter().map(Partition::to_string).collect();
            let mut header = vec!["λ \\ μ"];
            header.extend(labels.iter().map(String::as_str));
            let mut text = table(&header, &rows);
            text.push_str(&format!("\n\n{}", verdict(pass)));
            if let Err(e) = &unitriangular {
                text.push_str(&format!(": {e}"));
            }
            let json = json!({
                "check": "ximatrix", "n": n, "q": q, "partitions": m.partitions(),
                "expected": { "unitriangular": true },
                "observed": { "unitriangular": pass, "rows": m.rows() },
                "pass": pass,
            });
            Ok(Output { text, json, pass })
        }
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn numbers(v: &[BigInt]) -> Vec<serde_json::Number> {
    v.iter().map(bigint_serde::to_number).collect()
}

fn gl2_table(q: u64, d: u32, max_j: u32) -> Result<Output> {
    let rows = catalog(q, d, max_j)?;
    let show = |v: &Option<BigInt>| v.as_ref().map_or("?".to_string(), BigInt::to_string);
    let mut text_rows = Vec::new();
    for row in &rows {
        for (i, chain) in row.dims.iter().enumerate() {
            let mut cells = if i == 0 {
                vec![row.class.clone(), show(&row.a), show(&row.b)]
            } else {
                vec![String::new(), String::new(), String::new()]
            };
            cells.push(chain.member.to_string());
            match &chain.values {
                Some(values) => cells.extend(values.iter().map(BigInt::to_string)),
                None => cells.extend((0..=max_j).map(|_| "-".to_string())),
            }
            text_rows.push(cells);
        }
    }
    let labels: Vec<String> = (0..=max_j).map(|j| format!("j={j}")).collect();
    let mut header = vec!["class", "a", "b", "chain"];
    header.extend(labels.iter().map(String::as_str));
    let mut text = table(&header, &text_rows);
    let notes: Vec<String> =
        rows.iter().filter_map(|r: &CatalogRow| r.note.as_ref().map(|n| format!("{}: {n}", r.class))).collect();
    if !notes.is_empty() {
        text.push_str("\n\n");
        text.push_str(&notes.join("\n"));
    }
    Ok(Output::ok(text, json!({ "q": q, "d": d, "rows": rows })))
}
