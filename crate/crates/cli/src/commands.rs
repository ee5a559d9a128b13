use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use ternquart::algebra::{eta0, random_real_traceless, random_traceless};
use ternquart::covariants::recover_quartic;
use ternquart::idempotents::{genericity_report, solve_idempotents};
use ternquart::quartic_geometry::{bitangent_candidates, is_bitangent, min_pairwise_distance};
use ternquart::reconstruct::reconstruct;
use ternquart::verify::verify_algebra;
use ternquart::{
    Algebra, BitangencyCertificate, GenericityReport, IdempotentSet, PointConfiguration, SolverConfig, VerifyReport,
};

use crate::config::Format;
use crate::plot::{render_svg, PlotOptions};
use crate::{read_input, render, CliError, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ExampleName {
    Eta0,
}

/// Trace tolerance for algebra inputs, relative to the largest constant.
const INPUT_TRACE_TOL: f64 = 1e-10;

pub fn parse_algebra(text: &str) -> Result<Algebra, CliError> {
    let alg: Algebra = serde_json::from_str(text).map_err(|e| CliError::Input(format!("bad algebra JSON: {e}")))?;
    if !alg.is_traceless(INPUT_TRACE_TOL) {
        return Err(CliError::Input("algebra is not trace-free".into()));
    }
    Ok(alg)
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

fn emit<T: Serialize>(v: &T, fmt: Format, text: impl FnOnce(&T) -> String) -> String {
    match fmt {
        Format::Json => json(v),
        Format::Text => text(v),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct IdempotentsOutput {
    pub idempotents: IdempotentSet,
    pub genericity: GenericityReport,
}

pub fn idempotents(text: &str, cfg: &SolverConfig, fmt: Format) -> Result<Outcome, CliError> {
    let alg = parse_algebra(text)?;
    let x = solve_idempotents(&alg, cfg)?;
    let out = IdempotentsOutput {
        genericity: genericity_report(&x),
        idempotents: x,
    };
    Ok(Outcome {
        body: emit(&out, fmt, render::idempotents),
        pass: true,
    })
}

pub fn quartic(text: &str, fmt: Format) -> Result<Outcome, CliError> {
    let alg = parse_algebra(text)?;
    let q = recover_quartic(&alg)?;
    Ok(Outcome {
        body: emit(&q, fmt, render::quartic),
        pass: true,
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BitangentsOutput {
    pub certificates: Vec<BitangencyCertificate>,
    pub bitangent_count: usize,
    pub min_line_distance: f64,
}

pub fn bitangents(text: &str, cfg: &SolverConfig, fmt: Format) -> Result<Outcome, CliError> {
    let alg = parse_algebra(text)?;
    let x = solve_idempotents(&alg, cfg)?;
    let q = recover_quartic(&alg)?;
    let lines = bitangent_candidates(&alg, &x, cfg)?;
    let certificates = lines
        .iter()
        .map(|l| is_bitangent(&q.form, l, cfg))
        .collect::<ternquart::Result<Vec<_>>>()?;
    let out = BitangentsOutput {
        bitangent_count: certificates.iter().filter(|c| c.is_bitangent).count(),
        min_line_distance: min_pairwise_distance(&lines),
        certificates,
    };
    let pass = out.bitangent_count == lines.len();
    Ok(Outcome {
        body: emit(&out, fmt, render::bitangents),
        pass,
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BatchEntry {
    pub input: String,
    pub pass: bool,
    pub report: Option<VerifyReport>,
    pub error: Option<String>,
}

pub fn verify(inputs: &[PathBuf], random: Option<u64>, cfg: &SolverConfig, fmt: Format) -> Result<Outcome, CliError> {
    if inputs.len() == 1 && random.is_none() {
        let alg = parse_algebra(&read_input(&inputs[0])?)?;
        let r = verify_algebra(&alg, cfg)?;
        return Ok(Outcome {
            pass: r.pass,
            body: emit(&r, fmt, render::verify),
        });
    }
    let mut jobs: Vec<(String, Algebra)> = Vec::new();
    for p in inputs {
        jobs.push((p.display().to_string(), parse_algebra(&read_input(p)?)?));
    }
    for k in 0..random.unwrap_or(0) {
        let seed = cfg.seed.wrapping_add(k);
        jobs.push((format!("random:{seed}"), random_traceless(seed)));
    }
    if jobs.is_empty() {
        return Err(CliError::Input("verify needs at least one input or --random N".into()));
    }
    let entries: Vec<BatchEntry> = jobs
        .par_iter()
        .map(|(name, alg)| match verify_algebra(alg, cfg) {
            Ok(r) => BatchEntry {
                input: name.clone(),
                pass: r.pass,
                report: Some(r),
                error: None,
            },
            Err(e) => BatchEntry {
                input: name.clone(),
                pass: false,
                report: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let pass = entries.iter().all(|e| e.pass);
    Ok(Outcome {
        body: emit(&entries, fmt, |e| render::batch(e)),
        pass,
    })
}

pub fn invert(text: &str, _cfg: &SolverConfig, fmt: Format) -> Result<Outcome, CliError> {
    let points: PointConfiguration =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("bad points JSON: {e}")))?;
    points.validate()?;
    let r = reconstruct(&points)?;
    Ok(Outcome {
        body: emit(&r.algebra, fmt, |_| render::reconstruction(&r)),
        pass: true,
    })
}

pub fn random(seed: u64, real: bool, fmt: Format) -> Result<Outcome, CliError> {
    let alg = if real {
        random_real_traceless(seed)
    } else {
        random_traceless(seed)
    };
    Ok(Outcome {
        body: emit(&alg, fmt, render::algebra),
        pass: true,
    })
}

pub fn example(name: ExampleName, fmt: Format) -> Result<Outcome, CliError> {
    let alg = match name {
        ExampleName::Eta0 => eta0(),
    };
    Ok(Outcome {
        body: emit(&alg, fmt, render::algebra),
        pass: true,
    })
}

pub fn plot(text: &str, cfg: &SolverConfig, opts: &PlotOptions) -> Result<Outcome, CliError> {
    opts.validate()?;
    let alg = parse_algebra(text)?;
    Ok(Outcome {
        body: render_svg(&alg, cfg, opts)?,
        pass: true,
    })
}
