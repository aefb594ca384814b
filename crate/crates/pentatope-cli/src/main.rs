//! Command line front end: single-word queries, verification campaigns, the
//! identity family, vertex axioms, and lad certificates, in aligned text or
//! JSON. Progress goes to stderr, results to stdout, so reports pipe cleanly.
//!
//! Exit codes: 0 success / verified, 1 verification failure, 2 usage or
//! syntax errors.

use clap::{Parser, Subcommand, ValueEnum};
use pentatope::freewords::{alt_expression, pi_reduce, reduced_alt_norm, reduced_word_count, Word};
use pentatope::goldfield::Dyadic5;
use pentatope::quatrep::{adjoint, rho_with, simplex_volume_det_with, Quaternion5, VertexTable};
use pentatope::theoremlab::{
    check_certificate_with, check_word_with, derive_lad_certificate_with,
    run_verification_with_progress, verify_identity_family_with, TheoremReport,
};
use std::process::ExitCode;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "pentatope",
    version,
    about = "Exact arithmetic for the free group generated by the 4-simplex vertex quaternions"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Swap in a deliberately broken vertex table (fault-injection testing)
    #[arg(long, global = true, hide = true)]
    corrupt_vertex_table: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the quaternion representation rho(w)
    Eval { word: String },
    /// Reduced alternating norms ‖w‖_k (all k, or one with --k)
    Norm {
        word: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=3))]
        k: Option<u8>,
    },
    /// The π_k-reduced form red_k(w)
    Reduce {
        word: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=3))]
        k: u8,
    },
    /// The alternating pairs expression of w
    Expr { word: String },
    /// Per-component lads of rho(w)
    Lad { word: String },
    /// Per-word report: red_k, ‖w‖_k, x_k, lad(x_k) and the verdict per k
    Check { word: String },
    /// Check every reduced word up to a length, plus the identity family
    Verify {
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
        max_len: u64,
        /// 0 = default thread pool, 1 = sequential, n = dedicated pool
        #[arg(long, default_value_t = 0)]
        workers: u64,
    },
    /// Solve the quadratic identity family and validate its laws
    Identities,
    /// Check the vertex-table axioms (units, sum, inner products, adjoints, volume)
    Axioms,
    /// Derive and re-check a lad certificate for red_k(w)
    Certificate {
        word: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=3))]
        k: u8,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let table = make_table(cli.corrupt_vertex_table);
    match run(&cli, &table) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn make_table(corrupt: bool) -> VertexTable {
    let mut table = VertexTable::standard().clone();
    if corrupt {
        let bump = Quaternion5::new([
            Dyadic5::new(1, 0, 2),
            Dyadic5::zero(),
            Dyadic5::zero(),
            Dyadic5::zero(),
        ]);
        table.q[1] = &table.q[1] + &bump;
    }
    table
}

fn parse_word(text: &str) -> Result<Word, String> {
    text.parse::<Word>().map_err(|e| format!("{e} in {text:?}"))
}

fn run(cli: &Cli, table: &VertexTable) -> Result<u8, String> {
    match &cli.command {
        Command::Eval { word } => {
            let w = parse_word(word)?;
            let x = rho_with(table, &w);
            match cli.format {
                Format::Text => println!("rho({w}) = {x}"),
                Format::Json => println!("{}", serde_json::json!({ "word": w, "rho": x })),
            }
            Ok(0)
        }
        Command::Norm { word, k } => {
            let w = parse_word(word)?;
            match cli.format {
                Format::Text => match k {
                    Some(k) => println!("norm_{k}({w}) = {}", reduced_alt_norm(*k, &w)),
                    None => {
                        let mut rows = Vec::new();
                        for k in 0..4u8 {
                            rows.push(vec![
                                k.to_string(),
                                pi_reduce(k, &w).to_string(),
                                reduced_alt_norm(k, &w).to_string(),
                            ]);
                        }
                        print!("{}", render_table(&["k", "red_k(w)", "norm_k"], &rows));
                    }
                },
                Format::Json => match k {
                    Some(k) => println!(
                        "{}",
                        serde_json::json!({ "word": w, "k": k, "norm": reduced_alt_norm(*k, &w) })
                    ),
                    None => {
                        let norms: Vec<u64> = (0..4).map(|k| reduced_alt_norm(k, &w)).collect();
                        println!("{}", serde_json::json!({ "word": w, "norms": norms }));
                    }
                },
            }
            Ok(0)
        }
        Command::Reduce { word, k } => {
            let w = parse_word(word)?;
            let red = pi_reduce(*k, &w);
            match cli.format {
                Format::Text => println!("{red}"),
                Format::Json => {
                    println!("{}", serde_json::json!({ "word": w, "k": k, "redK": red }))
                }
            }
            Ok(0)
        }
        Command::Expr { word } => {
            let w = parse_word(word)?;
            let expr = alt_expression(&w).map_err(|e| e.to_string())?;
            match cli.format {
                Format::Text => println!(
                    "{expr}   alphabet {}, {} pairs",
                    if expr.alphabet_sign > 0 { "+" } else { "-" },
                    expr.pair_count()
                ),
                Format::Json => {
                    println!("{}", serde_json::json!({ "word": w, "expr": expr }))
                }
            }
            Ok(0)
        }
        Command::Lad { word } => {
            let w = parse_word(word)?;
            let x = rho_with(table, &w);
            match cli.format {
                Format::Text => {
                    let rows: Vec<Vec<String>> = (0..4u8)
                        .map(|k| {
                            vec![
                                k.to_string(),
                                x.component(k).to_string(),
                                x.component(k).lad().to_string(),
                            ]
                        })
                        .collect();
                    print!("{}", render_table(&["k", "x_k", "lad(x_k)"], &rows));
                }
                Format::Json => {
                    let lads: Vec<_> = (0..4).map(|k| x.component(k).lad()).collect();
                    println!(
                        "{}",
                        serde_json::json!({ "word": w, "rho": x, "lads": lads })
                    );
                }
            }
            Ok(0)
        }
        Command::Check { word } => {
            let w = parse_word(word)?;
            let report = check_word_with(table, &w);
            match cli.format {
                Format::Text => print!("{}", render_report(&report)),
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
            }
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Command::Verify { max_len, workers } => {
            let max_len = *max_len as usize;
            let workers = *workers as usize;
            eprintln!(
                "verifying {} reduced words up to length {max_len} (workers: {})",
                reduced_word_count(max_len),
                if workers == 0 {
                    "default".to_string()
                } else {
                    workers.to_string()
                }
            );
            let progress = |done: u64, total: u64| {
                eprint!("\rprefix blocks {done}/{total}");
                if done == total {
                    eprintln!();
                }
            };
            let report = run_verification_with_progress(table, max_len, workers, &progress);
            match cli.format {
                Format::Text => {
                    println!(
                        "{} words, {} failures",
                        report.words_checked,
                        report.failures.len()
                    );
                    if report.freeness_failures.is_empty() {
                        println!("freeness: no nontrivial word maps to 1");
                    } else {
                        println!(
                            "freeness VIOLATED by {} words: {:?}",
                            report.freeness_failures.len(),
                            report.freeness_failures
                        );
                    }
                    println!(
                        "identity family: {} decompositions, {} failures",
                        report.identity_family.len(),
                        report.identity_failures.len()
                    );
                    println!(
                        "max |lad| = {}, elapsed {} ms",
                        report.max_abs_lad, report.elapsed_ms
                    );
                    for failure in &report.failures {
                        println!();
                        print!("{}", render_report(failure));
                    }
                    for failure in &report.identity_failures {
                        println!(
                            "identity failure at (a={}, i={}, j={}, branch={}): {}",
                            failure.a, failure.i, failure.j, failure.branch, failure.reason
                        );
                    }
                }
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
            }
            Ok(if report.ok() { 0 } else { 1 })
        }
        Command::Identities => {
            let family = verify_identity_family_with(table);
            match cli.format {
                Format::Text => {
                    let rows: Vec<Vec<String>> = family
                        .entries
                        .iter()
                        .map(|e| {
                            vec![
                                format!("({},{},{})", e.a, e.i, e.j),
                                if e.galois_branch > 0 { "+" } else { "-" }.to_string(),
                                e.c.to_string(),
                                e.k.to_string(),
                                e.l.to_string(),
                                if e.residual_sign > 0 { "+" } else { "-" }.to_string(),
                                e.to_string(),
                            ]
                        })
                        .collect();
                    print!(
                        "{}",
                        render_table(
                            &["(a,i,j)", "branch", "c", "k", "l", "sign", "identity"],
                            &rows
                        )
                    );
                    println!(
                        "{} decompositions, {} failures, k histogram {:?}",
                        family.entries.len(),
                        family.failures.len(),
                        family.k_histogram
                    );
                    for failure in &family.failures {
                        println!(
                            "failure at (a={}, i={}, j={}, branch={}): {}",
                            failure.a, failure.i, failure.j, failure.branch, failure.reason
                        );
                    }
                }
                Format::Json => println!("{}", serde_json::to_string_pretty(&family).unwrap()),
            }
            Ok(if family.ok() { 0 } else { 1 })
        }
        Command::Axioms => run_axioms(cli, table),
        Command::Certificate { word, k } => {
            let w = parse_word(word)?;
            let red = pi_reduce(*k, &w);
            if red != w {
                eprintln!("note: certifying red_{k}({w}) = {red}");
            }
            if red.is_empty() {
                return Err(format!("red_{k}({w}) is the identity; nothing to certify"));
            }
            match derive_lad_certificate_with(table, &red, *k) {
                Ok(cert) => {
                    let checked = check_certificate_with(table, &cert);
                    match cli.format {
                        Format::Text => {
                            print!("{cert}");
                            match &checked {
                                Ok(()) => {
                                    println!("certificate verified ({} nodes)", cert.node_count())
                                }
                                Err(e) => println!("certificate REJECTED: {e}"),
                            }
                        }
                        Format::Json => {
                            let verdict =
                                checked.as_ref().map(|_| "verified").unwrap_or("rejected");
                            println!(
                                "{}",
                                serde_json::json!({
                                    "word": red,
                                    "k": k,
                                    "certificate": cert,
                                    "verdict": verdict,
                                })
                            );
                        }
                    }
                    Ok(if checked.is_ok() { 0 } else { 1 })
                }
                Err(unhandled) => {
                    match cli.format {
                        Format::Text => println!("unhandled pattern: {unhandled}"),
                        Format::Json => {
                            println!("{}", serde_json::json!({ "unhandledPattern": unhandled }))
                        }
                    }
                    Ok(0)
                }
            }
        }
    }
}

fn run_axioms(cli: &Cli, table: &VertexTable) -> Result<u8, String> {
    let mut checks: Vec<(String, bool)> = Vec::new();
    checks.push(("q0 is the unit".into(), table.vertex(0).is_one()));
    for idx in 0..=4u8 {
        checks.push((
            format!("q{idx} has unit norm"),
            table.vertex(idx).norm_sq().is_one(),
        ));
    }
    let sum = (0..=4u8).fold(Quaternion5::zero(), |acc, idx| &acc + table.vertex(idx));
    checks.push(("vertices sum to zero".into(), sum.is_zero()));
    let quarter = Dyadic5::new(-1, 0, 2);
    let mut inner_ok = true;
    for a in 0..=4u8 {
        for b in 0..a {
            let dot = table
                .vertex(a)
                .components()
                .iter()
                .zip(table.vertex(b).components())
                .map(|(x, y)| x * y)
                .fold(Dyadic5::zero(), |acc, v| &acc + &v);
            inner_ok &= dot == quarter;
        }
    }
    checks.push(("pairwise inner products are -1/4".into(), inner_ok));
    let klein: [[u8; 5]; 4] = [
        [0, 1, 2, 3, 4],
        [0, 3, 4, 1, 2],
        [0, 4, 3, 2, 1],
        [0, 2, 1, 4, 3],
    ];
    let mut adjoint_ok = true;
    for k in 1..4u8 {
        for j in 1..=4u8 {
            adjoint_ok &=
                adjoint(k, table.vertex(j)) == *table.vertex(klein[k as usize][j as usize]);
        }
    }
    checks.push((
        "adjoint action permutes vertices by the Klein table".into(),
        adjoint_ok,
    ));
    let det = simplex_volume_det_with(table);
    checks.push((
        format!("simplex volume determinant {det} is positive"),
        det.sign() > 0,
    ));

    let all_ok = checks.iter().all(|(_, ok)| *ok);
    match cli.format {
        Format::Text => {
            for (name, ok) in &checks {
                println!("{} {name}", if *ok { "ok  " } else { "FAIL" });
            }
        }
        Format::Json => {
            let items: Vec<_> = checks
                .iter()
                .map(|(name, ok)| serde_json::json!({ "check": name, "pass": ok }))
                .collect();
            println!("{}", serde_json::json!({ "checks": items, "pass": all_ok }));
        }
    }
    Ok(if all_ok { 0 } else { 1 })
}

fn render_report(report: &TheoremReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("w = {}\n", report.word));
    out.push_str(&format!("rho(w) = {}\n", report.rho));
    let rows: Vec<Vec<String>> = report
        .per_k
        .iter()
        .map(|p| {
            vec![
                p.k.to_string(),
                p.red.to_string(),
                p.norm.to_string(),
                p.x.to_string(),
                p.lad.to_string(),
                if p.pass { "yes" } else { "NO" }.to_string(),
            ]
        })
        .collect();
    out.push_str(&render_table(
        &["k", "red_k(w)", "norm_k", "x_k", "lad(x_k)", "pass"],
        &rows,
    ));
    out.push_str(&format!(
        "result: {}\n",
        if report.all_pass() { "PASS" } else { "FAIL" }
    ));
    out
}

fn render_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let cols = headers.len();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (c, cell) in row.iter().enumerate().take(cols) {
            widths[c] = widths[c].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let push_row = |cells: Vec<&str>, out: &mut String| {
        let line: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(c, cell)| format!("{cell:<width$}", width = widths[c]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    push_row(headers.to_vec(), &mut out);
    for row in rows {
        push_row(row.iter().map(String::as_str).collect(), &mut out);
    }
    out
}
