use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::ValueEnum;
use rayon::prelude::*;
use vvmf::valuation::ValuationTable;
use vvmf::{
    check_constraints, detect_unbounded, enumerate_pairs, enumerate_triples, f0_direct, f0_sj_form,
    valuation_table, ClassificationReport, Component, QSeries, Rational, ReprParams, REFERENCE_PAIRS,
};

use crate::config::{Format, Primes, RunConfig};
use crate::output::{
    file_stem, render, to_json, valuation_to_csv, write_file, ComponentGrowth, ComputeReport, Disagreement,
    GrowthReport, PairsReport, TripleRow, TriplesReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    Mismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnumerateMode {
    Pairs,
    Triples,
}

const DEFAULT_OUT: &str = "vvmf-out";

fn out_dir(cfg: &RunConfig) -> PathBuf {
    cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

fn label(p: &ReprParams) -> String {
    format!("({},{},{})", p.a, p.b, p.level)
}

fn json_only(cfg: &RunConfig, command: &str) -> Result<()> {
    if cfg.format == Format::Csv {
        bail!("{command} only emits JSON");
    }
    Ok(())
}

/// Prints to stdout and, when an output directory was given, writes the
/// same text to `name` there.
fn emit(cfg: &RunConfig, name: &str, text: &str) -> Result<()> {
    print!("{text}");
    if let Some(dir) = &cfg.output_dir {
        write_file(dir, name, text)?;
    }
    Ok(())
}

fn notes(report: &ClassificationReport) -> Vec<String> {
    let mut notes: Vec<String> =
        report.failures().map(|c| format!("fails {}: {}", c.constraint, c.statement)).collect();
    notes.extend(report.exclusion_reason.clone());
    notes.extend(report.notes.iter().cloned());
    notes
}

fn compute_one(p: &ReprParams, order: usize) -> Result<ComputeReport> {
    let mut series = Vec::with_capacity(2);
    let mut disagreement = None;
    for c in Component::BOTH {
        let direct = f0_direct(p, c, order)?;
        let sj = f0_sj_form(p, c, order)?;
        if let Err(index) = direct.agrees_with(&sj) {
            disagreement.get_or_insert(Disagreement { component: c, index });
        }
        series.push(direct);
    }
    let comp2 = series.pop().expect("two components");
    let comp1 = series.pop().expect("two components");
    let report = check_constraints(p);
    Ok(ComputeReport {
        params: p.clone(),
        order,
        modular: report.modular,
        cross_check: disagreement.is_none(),
        disagreement,
        notes: notes(&report),
        comp1,
        comp2,
    })
}

pub fn compute(cfg: &RunConfig) -> Result<Status> {
    let params = cfg.resolve_nonempty()?;
    let dir = out_dir(cfg);
    let reports: Vec<ComputeReport> =
        params.par_iter().map(|p| compute_one(p, cfg.order)).collect::<Result<_>>()?;
    let mut status = Status::Success;
    for r in &reports {
        let name = format!("f0_{}.{}", file_stem(&r.params), cfg.format.extension());
        write_file(&dir, &name, &render(r, cfg.format, ComputeReport::to_csv)?)?;
        match r.disagreement {
            Some(d) => {
                status = Status::Mismatch;
                eprintln!(
                    "mismatch: {} component {}: recursions differ at n = {}",
                    label(&r.params),
                    d.component,
                    d.index
                );
            }
            None => println!("{}: order {}, recursions agree, wrote {}", label(&r.params), r.order, name),
        }
        for note in &r.notes {
            println!("{}: note: {note}", label(&r.params));
        }
    }
    Ok(status)
}

fn applicable_primes(cfg: &RunConfig, p: &ReprParams) -> (Vec<u64>, Vec<u64>) {
    match &cfg.primes {
        Primes::Auto => (p.cofactor_primes(), Vec::new()),
        Primes::List(list) => list.iter().partition(|&&q| p.cofactor % q == 0),
    }
}

/// Scales `a_index` by `factor` so that its valuation no longer matches.
fn corrupt(f: &QSeries, index: usize, factor: u64) -> Result<QSeries> {
    if index > f.order() {
        bail!("corrupt index {index} beyond horizon {}", f.order());
    }
    let mut coeffs = f.coeffs().to_vec();
    coeffs[index] *= Rational::from_integer(factor.into());
    Ok(QSeries::new(f.offset().clone(), coeffs)?)
}

fn verify_tables(
    cfg: &RunConfig,
    p: &ReprParams,
    primes: &[u64],
    corrupt_index: Option<usize>,
) -> Result<Vec<ValuationTable>> {
    let mut tables = Vec::new();
    for c in Component::BOTH {
        let mut f = f0_direct(p, c, cfg.horizon)?;
        if let Some(k) = corrupt_index {
            f = corrupt(&f, k, p.cofactor)?;
        }
        for &prime in primes {
            tables.push(valuation_table(prime, &f, p, c)?);
        }
    }
    Ok(tables)
}

pub fn verify(cfg: &RunConfig, corrupt_index: Option<usize>) -> Result<Status> {
    let params = cfg.resolve_nonempty()?;
    let dir = out_dir(cfg);
    let work: Vec<(ReprParams, Vec<u64>, Vec<u64>)> = params
        .into_iter()
        .map(|p| {
            let (primes, skipped) = applicable_primes(cfg, &p);
            (p, primes, skipped)
        })
        .collect();
    let results: Vec<Vec<ValuationTable>> = work
        .par_iter()
        .map(|(p, primes, _)| verify_tables(cfg, p, primes, corrupt_index))
        .collect::<Result<_>>()?;

    let mut status = Status::Success;
    for ((p, primes, skipped), tables) in work.iter().zip(&results) {
        for q in skipped {
            println!("{}: {q} does not divide Q = {}, skipped", label(p), p.cofactor);
        }
        if primes.is_empty() {
            println!("{}: no applicable primes (Q = {})", label(p), p.cofactor);
            continue;
        }
        for t in tables {
            let name = format!(
                "valuation_{}_c{}_p{}.{}",
                file_stem(p),
                t.component,
                t.prime,
                cfg.format.extension()
            );
            write_file(&dir, &name, &render(t, cfg.format, valuation_to_csv)?)?;
            match t.first_mismatch() {
                Some(n) => {
                    status = Status::Mismatch;
                    eprintln!(
                        "mismatch: {} component {} p = {}: first mismatch at n = {n}",
                        label(p),
                        t.component,
                        t.prime
                    );
                }
                None => println!(
                    "{} component {} p = {}: all {} rows match",
                    label(p),
                    t.component,
                    t.prime,
                    t.entries.len()
                ),
            }
        }
    }
    Ok(status)
}

pub fn classify(cfg: &RunConfig) -> Result<Status> {
    json_only(cfg, "classify")?;
    let params = cfg.resolve_nonempty()?;
    let reports: Vec<ClassificationReport> = params.iter().map(check_constraints).collect();
    emit(cfg, "classify.json", &to_json(&reports)?)?;
    Ok(Status::Success)
}

fn enumerate_pair_mode(cfg: &RunConfig) -> Result<Status> {
    let pairs = enumerate_pairs();
    let reference: BTreeSet<(u64, u64)> = REFERENCE_PAIRS.into_iter().collect();
    let derived: BTreeSet<(u64, u64)> = pairs.iter().copied().collect();
    let matches_reference = derived == reference && pairs.len() == reference.len();
    let report = PairsReport { pairs, matches_reference };
    let name = format!("pairs.{}", cfg.format.extension());
    emit(cfg, &name, &render(&report, cfg.format, PairsReport::to_csv)?)?;
    if matches_reference {
        eprintln!("pairs: {} derived, reference list: pass", report.pairs.len());
        Ok(Status::Success)
    } else {
        eprintln!("pairs: {} derived, reference list: FAIL", report.pairs.len());
        Ok(Status::Mismatch)
    }
}

fn enumerate_triple_mode(cfg: &RunConfig) -> Result<Status> {
    if !cfg.triples.is_empty() {
        bail!("enumerate triples takes --pair filters, not --triple");
    }
    let mut params: Vec<ReprParams> = if cfg.pairs.is_empty() {
        enumerate_triples(None, cfg.max_level)
    } else {
        cfg.pairs.iter().flat_map(|f| enumerate_triples(Some(f.0), cfg.max_level)).collect()
    };
    params.sort_by_key(|p| p.triple());
    params.dedup_by_key(|p| p.triple());
    let mut status = Status::Success;
    for p in &params {
        let report = check_constraints(p);
        if !report.valid {
            status = Status::Mismatch;
            eprintln!("mismatch: {} listed but fails its constraint checks", label(p));
        }
    }
    let filters = if cfg.pairs.is_empty() {
        vec![format!("N<={}", cfg.max_level)]
    } else {
        cfg.pairs.iter().map(|f| f.to_string()).collect()
    };
    let report = TriplesReport { filters, triples: params.iter().map(TripleRow::from).collect() };
    let name = format!("triples.{}", cfg.format.extension());
    emit(cfg, &name, &render(&report, cfg.format, TriplesReport::to_csv)?)?;
    eprintln!("triples: {}", report.triples.len());
    Ok(status)
}

pub fn enumerate(cfg: &RunConfig, mode: EnumerateMode) -> Result<Status> {
    match mode {
        EnumerateMode::Pairs => enumerate_pair_mode(cfg),
        EnumerateMode::Triples => enumerate_triple_mode(cfg),
    }
}

fn growth_one(cfg: &RunConfig, p: &ReprParams) -> Result<GrowthReport> {
    let primes = match &cfg.primes {
        Primes::Auto => p.cofactor_primes(),
        Primes::List(list) => list.clone(),
    };
    // every denominator of F0 divides a product of factors n c (M n +/- d) N
    let prime_bound = p.level * (cfg.horizon as u64 + 1);
    let components = Component::BOTH
        .into_iter()
        .map(|c| {
            let f = f0_direct(p, c, cfg.horizon)?;
            Ok(ComponentGrowth {
                component: c,
                report: detect_unbounded(&f, &primes, cfg.horizon, prime_bound)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(GrowthReport { params: p.clone(), components })
}

pub fn report(cfg: &RunConfig) -> Result<Status> {
    json_only(cfg, "report")?;
    let params = cfg.resolve_nonempty()?;
    let reports: Vec<GrowthReport> = params.par_iter().map(|p| growth_one(cfg, p)).collect::<Result<_>>()?;
    emit(cfg, "report.json", &to_json(&reports)?)?;
    Ok(Status::Success)
}
