//! Batch command-line surface over the identity catalog: verify identities,
//! list witnesses, inspect inverse Euler transforms, and run the linear-term
//! search.
//!
//! Exit codes: 0 all requested checks pass, 1 a verification mismatch was
//! found, 2 usage or catalog errors.

use clap::{Parser, Subcommand, ValueEnum};
use qjagged::catalog::{search_base_for, Catalog};
use qjagged::staircase::{classify_4a, remove_staircase, Case4a};
use qjagged::verify::{product_witnesses, search_linear_shifts, verify_entry, Outcome};
use rayon::prelude::*;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qjagged",
    version,
    about = "Exact verification of Rogers-Ramanujan-type partition identities"
)]
struct Cli {
    /// Path to a catalog JSON file (defaults to the built-in registry).
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compare analytic sum, product, and partition counts for identities.
    Verify {
        /// Identity filter; `*` matches any run of characters.
        #[arg(long, default_value = "*")]
        id: String,
        /// Series comparison order (the full published bound is 500).
        #[arg(long, default_value_t = 200)]
        order: i64,
        /// Partition-count comparison order (at most `order`).
        #[arg(long, default_value_t = 80)]
        count_order: i64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Worker threads for verifying identities concurrently.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List the weight-n witnesses of one side of an identity.
    List {
        #[arg(long)]
        id: String,
        #[arg(long, value_enum)]
        side: Side,
        #[arg(long)]
        n: u32,
    },
    /// Print the inverse Euler transform of an identity's product side.
    InverseEuler {
        #[arg(long)]
        id: String,
        /// Use the k-th alternative printed form instead of the main one.
        #[arg(long)]
        alt: Option<usize>,
        #[arg(long, default_value_t = 200)]
        order: i64,
        /// Periodicity modulus (default: the product's own, doubled when it
        /// has (1+q^m) factors).
        #[arg(long)]
        modulus: Option<u32>,
    },
    /// Search linear exponent terms whose sum-side has a periodic +-1
    /// inverse Euler transform.
    Search {
        /// Identity whose sum provides the base quadratic form.
        #[arg(long)]
        base: String,
        /// Comma-separated lower corner of the search box.
        #[arg(long)]
        lo: Option<String>,
        /// Comma-separated upper corner of the search box.
        #[arg(long)]
        hi: Option<String>,
        #[arg(long, default_value_t = 120)]
        order: i64,
        #[arg(long, default_value_t = 12)]
        modulus: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Sum,
    Product,
    Jagged,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let catalog = match load_catalog(&cli.catalog) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.cmd {
        Cmd::Verify {
            id,
            order,
            count_order,
            format,
            threads,
        } => cmd_verify(&catalog, &id, order, count_order, format, threads),
        Cmd::List { id, side, n } => cmd_list(&catalog, &id, side, n),
        Cmd::InverseEuler {
            id,
            alt,
            order,
            modulus,
        } => cmd_inverse_euler(&catalog, &id, alt, order, modulus),
        Cmd::Search {
            base,
            lo,
            hi,
            order,
            modulus,
        } => cmd_search(&catalog, &base, lo, hi, order, modulus),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_catalog(path: &Option<PathBuf>) -> Result<Catalog, String> {
    match path {
        None => Ok(Catalog::builtin()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read {}: {e}", p.display()))?;
            Catalog::from_json(&text).map_err(|e| e.to_string())
        }
    }
}

/// `*`-wildcard match.
fn glob_match(pattern: &str, s: &str) -> bool {
    fn rec(p: &[u8], s: &[u8]) -> bool {
        match p.split_first() {
            None => s.is_empty(),
            Some((b'*', rest)) => (0..=s.len()).any(|k| rec(rest, &s[k..])),
            Some((c, rest)) => s
                .split_first()
                .is_some_and(|(d, tail)| c == d && rec(rest, tail)),
        }
    }
    rec(pattern.as_bytes(), s.as_bytes())
}

fn cmd_verify(
    catalog: &Catalog,
    id: &str,
    order: i64,
    count_order: i64,
    format: Format,
    threads: Option<usize>,
) -> Result<ExitCode, String> {
    if count_order > order || count_order < 0 {
        return Err("require order >= count_order >= 0".into());
    }
    let selected: Vec<_> = catalog
        .entries
        .iter()
        .filter(|e| glob_match(id, &e.id))
        .collect();
    if selected.is_empty() {
        return Err(format!("unknown identity `{id}`"));
    }
    let run = || -> Result<Vec<_>, String> {
        selected
            .par_iter()
            .map(|e| verify_entry(e, order, count_order).map_err(|err| err.to_string()))
            .collect()
    };
    let reports = match threads {
        None => run()?,
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| e.to_string())?
            .install(run)?,
    };

    match format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&reports).unwrap());
        }
        Format::Csv => {
            println!(
                "id,order,count_order,sum_vs_product,rules_vs_sum,rules_vs_product,\
                 coefficient_at_order,wall_ms"
            );
            for r in &reports {
                println!(
                    "{},{},{},{},{},{},{},{}",
                    r.id,
                    r.order,
                    r.count_order,
                    outcome_str(&r.sum_vs_product),
                    outcome_str(&r.rules_vs_sum),
                    outcome_str(&r.rules_vs_product),
                    r.coefficient_at_order,
                    r.wall_ms
                );
            }
        }
        Format::Table => {
            println!(
                "{:<20} {:>6} {:>6}  {:<14} {:<14} {:<14} {:>8}",
                "identity", "order", "count", "sum=product", "rules=sum", "rules=product", "ms"
            );
            for r in &reports {
                println!(
                    "{:<20} {:>6} {:>6}  {:<14} {:<14} {:<14} {:>8}",
                    r.id,
                    r.order,
                    r.count_order,
                    outcome_str(&r.sum_vs_product),
                    outcome_str(&r.rules_vs_sum),
                    outcome_str(&r.rules_vs_product),
                    r.wall_ms
                );
            }
        }
    }
    let all_pass = reports.iter().all(|r| r.passed());
    if !all_pass {
        for r in reports.iter().filter(|r| !r.passed()) {
            eprintln!("mismatch in {}", r.id);
        }
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn outcome_str(o: &Outcome) -> String {
    match o {
        Outcome::Pass => "pass".into(),
        Outcome::Mismatch { exponent, lhs, rhs } => format!("q^{exponent}:{lhs}!={rhs}"),
    }
}

fn cmd_list(catalog: &Catalog, id: &str, side: Side, n: u32) -> Result<ExitCode, String> {
    let entry = catalog.get(id).map_err(|e| e.to_string())?;
    match side {
        Side::Sum => {
            for pi in entry.rules.enumerate(n) {
                println!("{pi}");
            }
        }
        Side::Product => {
            let witnesses = product_witnesses(&entry.product, n).map_err(|e| e.to_string())?;
            for pi in witnesses {
                println!("{pi}");
            }
        }
        Side::Jagged => {
            for pi in entry.rules.enumerate(n) {
                if entry.x_shift == 1 {
                    let (case, mu) = classify_4a(&pi, &entry.rules).map_err(|e| e.to_string())?;
                    let tag = match case {
                        Case4a::A => "case a",
                        Case4a::B => "case b",
                    };
                    println!("{pi} -> {} [{tag}]", fmt_entries(mu.entries()));
                } else {
                    let mu = remove_staircase(&pi, entry.staircase_step, false);
                    println!("{pi} -> {}", fmt_entries(mu.entries()));
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn fmt_entries(entries: &[i64]) -> String {
    if entries.is_empty() {
        return "(empty)".into();
    }
    entries
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_inverse_euler(
    catalog: &Catalog,
    id: &str,
    alt: Option<usize>,
    order: i64,
    modulus: Option<u32>,
) -> Result<ExitCode, String> {
    let entry = catalog.get(id).map_err(|e| e.to_string())?;
    let spec = match alt {
        None => &entry.product,
        Some(k) => entry
            .alt_products
            .get(k)
            .ok_or_else(|| format!("`{id}` has no alternative product #{k}"))?,
    };
    let f = qjagged::qpoch::expand_product(spec, order);
    let transform = qjagged::qpoch::inverse_euler(&f);
    let rendered: Vec<String> = transform.iter().map(|v| v.to_string()).collect();
    println!("a_1..a_{order}: {}", rendered.join(","));
    let modulus = modulus.unwrap_or_else(|| {
        if spec.factors.iter().any(|f| f.plus_sign) {
            2 * spec.modulus
        } else {
            spec.modulus
        }
    });
    match qjagged::qpoch::is_periodic_pm1(&transform, modulus, 0) {
        Some(map) => {
            let cells: Vec<String> = map
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(r, &v)| format!("{r}:{v:+}"))
                .collect();
            println!(
                "periodic mod {modulus}; entries by residue: {{{}}}",
                cells.join(", ")
            );
        }
        None => println!("not periodic mod {modulus} with entries in -1..1"),
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_corner(s: &Option<String>, rank: usize, default: i64) -> Result<Vec<i64>, String> {
    match s {
        None => Ok(vec![default; rank]),
        Some(text) => {
            let v: Result<Vec<i64>, _> = text.split(',').map(|t| t.trim().parse()).collect();
            let v = v.map_err(|e| format!("bad box corner `{text}`: {e}"))?;
            if v.len() != rank {
                return Err(format!("box corner needs {rank} components"));
            }
            Ok(v)
        }
    }
}

fn cmd_search(
    catalog: &Catalog,
    base_id: &str,
    lo: Option<String>,
    hi: Option<String>,
    order: i64,
    modulus: u32,
) -> Result<ExitCode, String> {
    let base = search_base_for(catalog, base_id).map_err(|e| e.to_string())?;
    let rank = base.rank();
    let (lo_default, hi_default) = if rank == 3 { (-4, 12) } else { (0, 10) };
    let lo = parse_corner(&lo, rank, lo_default)?;
    let hi = parse_corner(&hi, rank, hi_default)?;
    let volume: i64 = lo
        .iter()
        .zip(&hi)
        .map(|(&a, &b)| (b - a + 1).max(0))
        .product();
    if volume > 1_000_000 {
        return Err(format!("search box of {volume} candidates exceeds the budget"));
    }
    eprintln!("searching {volume} candidates at order {order} (mod {modulus})...");
    let hits = search_linear_shifts(&base, &lo, &hi, order, modulus).map_err(|e| e.to_string())?;
    for h in &hits {
        let classes: Vec<String> = h
            .residues
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(r, &v)| format!("{r}:{v:+}"))
            .collect();
        println!(
            "L=({}) residues {{{}}}",
            h.linear
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(","),
            classes.join(", ")
        );
    }
    println!("{} hits", hits.len());
    Ok(ExitCode::SUCCESS)
}
