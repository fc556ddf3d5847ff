//! `anyon-forge` command-line front end. Every command prints one JSON
//! document on stdout; diagnostics go to stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use anyon_forge::anyon_model::{verify_modular_data, ModularChecks};
use anyon_forge::braid::{
    self, compile, equiv_up_to_phase, gate_library, measure, simulate, BraidWord, GateName,
};
use anyon_forge::consistency::{
    braided_subsets, hexagon_reductions, hexagon_sweep, pentagon_sweep, solve_defect_f,
    solve_defect_r, FSymbolSet, RSymbolSet,
};
use anyon_forge::lattice::{self, build_patch, verify_defect, Boundaries, StabilizerKind};
use anyon_forge::linalg::{self, Mat4};
use anyon_forge::{AnyonModel, DefectRepresentation, Error, FusionBasisState};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const SEED_VAR: &str = "ANYON_FORGE_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "anyon-forge",
    version,
    about = "Twist-defect anyons: consistency solving, braid compilation, lattice checks"
)]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the defect F-matrix or R-symbols and report consistency residuals.
    Solve {
        #[arg(long, value_enum)]
        what: What,
        /// Include every F- or R-symbol of the model.
        #[arg(long)]
        full: bool,
    },
    /// Compile the named gate library and compare with reference gates.
    VerifyGates {
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Compile a braid word such as "s1^-1 s3 s5^-1".
    Compile {
        word: String,
        /// Basis state the word is applied to.
        #[arg(long, default_value = "00")]
        input: String,
        /// Report the outcome distribution of the final state.
        #[arg(long)]
        measure: bool,
        /// Draw this many seeded samples from the distribution.
        #[arg(long)]
        samples: Option<u64>,
        /// Sampling seed; falls back to ANYON_FORGE_SEED.
        #[arg(long)]
        seed: Option<u64>,
        /// Library gate to report the projective fidelity against.
        #[arg(long)]
        reference: Option<String>,
    },
    /// One braided Grover iteration on two qubits.
    Grover {
        #[arg(long, default_value = "00")]
        target: String,
    },
    /// Check the XYZZZ defect operator against the stabilizers of a patch.
    Lattice {
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long, default_value_t = 3)]
        height: usize,
        /// Side tags left,right,bottom,top (smooth|rough or S|R).
        #[arg(long, default_value = "rough,smooth,smooth,smooth")]
        boundaries: String,
        /// Five comma-separated site indices; defaults to the junction fixture.
        #[arg(long)]
        support: Option<String>,
        /// Include every stabilizer as a Pauli string.
        #[arg(long)]
        dump: bool,
    },
    /// Fusion-model utilities.
    Model {
        #[command(subcommand)]
        action: ModelAction,
    },
}

#[derive(Subcommand, Debug)]
enum ModelAction {
    /// Check fusion-ring laws and any modular data of a JSON model.
    Validate {
        path: PathBuf,
        /// Also require (ST)³ ∝ S².
        #[arg(long)]
        st_cubed: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum What {
    F,
    R,
}

/// Command failure with a machine-readable code.
struct Failure {
    code: &'static str,
    message: String,
    payload: Option<Value>,
}

impl Failure {
    fn new(code: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
            payload: None,
        }
    }

    fn with_payload(mut self, payload: Value) -> Self {
        self.payload = Some(payload);
        self
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } => "parse_error",
            Error::GeneratorRange(_) | Error::SiteRange { .. } => "range_error",
            Error::Parameter(_) => "parameter_error",
            Error::Precondition(_) => "precondition_error",
            Error::Shape(_) => "shape_error",
            Error::UnknownLabel(_)
            | Error::InvalidModel(_)
            | Error::ModelSpec(_)
            | Error::Json(_) => "model_error",
            Error::NoModularData => "no_modular_data",
            Error::MissingFSymbol(_) | Error::MissingRSymbol(_) => "missing_symbol",
        };
        let mut f = Failure::new(code, e.to_string());
        if let Error::Parse {
            position, token, ..
        } = &e
        {
            f.payload = Some(json!({ "position": position, "token": token }));
        }
        f
    }
}

type Outcome = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            let rendered = e.render().to_string();
            let message = rendered
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ");
            let doc = json!({
                "status": "error",
                "error": { "code": "usage", "message": message },
            });
            emit(&doc.to_string());
            return ExitCode::from(2);
        }
    };

    let name = command_name(&cli.command);
    let outcome = run(cli.command);
    let (doc, code) = match outcome {
        Ok(result) => (
            json!({ "status": "ok", "command": name, "result": result }),
            ExitCode::SUCCESS,
        ),
        Err(f) => {
            eprintln!("anyon-forge {name}: {}", f.message);
            let mut doc = json!({
                "status": "error",
                "command": name,
                "error": { "code": f.code, "message": f.message },
            });
            if let Some(p) = f.payload {
                doc["result"] = p;
            }
            (doc, ExitCode::FAILURE)
        }
    };
    let text = if cli.pretty {
        serde_json::to_string_pretty(&doc)
    } else {
        serde_json::to_string(&doc)
    };
    emit(&text.expect("JSON values serialize"));
    code
}

/// Writes one line to stdout, tolerating a closed pipe.
fn emit(line: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Solve { .. } => "solve",
        Command::VerifyGates { .. } => "verify-gates",
        Command::Compile { .. } => "compile",
        Command::Grover { .. } => "grover",
        Command::Lattice { .. } => "lattice",
        Command::Model { .. } => "model validate",
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Solve {
            what: What::F,
            full,
        } => solve_f(full),
        Command::Solve {
            what: What::R,
            full,
        } => solve_r(full),
        Command::VerifyGates { tol } => verify_gates(tol),
        Command::Compile {
            word,
            input,
            measure,
            samples,
            seed,
            reference,
        } => compile_word(&word, &input, measure, samples, seed, reference.as_deref()),
        Command::Grover { target } => grover(&target),
        Command::Lattice {
            width,
            height,
            boundaries,
            support,
            dump,
        } => lattice_check(width, height, &boundaries, support.as_deref(), dump),
        Command::Model {
            action: ModelAction::Validate { path, st_cubed },
        } => validate_model(&path, st_cubed),
    }
}

fn solve_f(full: bool) -> Outcome {
    let model = AnyonModel::z2_defect();
    let sol = solve_defect_f();
    let symbols = FSymbolSet::for_defect_model(&model, &sol.matrix, sol.kappa)?;
    let sweep = pentagon_sweep(&model, &symbols)?;
    let mut out = json!({
        "matrix": linalg::to_grid(&sol.matrix),
        "basis": ["1", "f"],
        "kappa": sol.kappa,
        "a_factor": linalg::pair(sol.a_factor),
        "branches_examined": sol.branches_examined,
        "branches_consistent": sol.branches_consistent,
        "pentagon": {
            "externals_checked": sweep.externals_checked,
            "instances_checked": sweep.instances_checked,
            "max_residual": sweep.max_residual,
        },
        "symbol_count": symbols.len(),
    });
    if full {
        out["symbols"] = json!(symbols.to_json(&model));
    }
    Ok(out)
}

fn solve_r(full: bool) -> Outcome {
    let model = AnyonModel::z2_defect();
    let f = solve_defect_f();
    let sol = solve_defect_r(&f.matrix)?;
    let symbols = FSymbolSet::for_defect_model(&model, &f.matrix, f.kappa)?;
    let r = RSymbolSet::for_defect_model(&model, &sol.canonical)?;
    let mut max_residual = 0.0f64;
    let mut externals = 0;
    for subset in braided_subsets(&model)? {
        let sweep = hexagon_sweep(&model, &symbols, &r, &subset)?;
        max_residual = max_residual.max(sweep.max_residual);
        externals += sweep.externals_checked;
    }
    let describe = |d: &anyon_forge::consistency::DefectR| {
        json!({
            "vacuum": linalg::pair(d.vacuum),
            "fermion": linalg::pair(d.fermion),
            "twist_fermion": linalg::pair(d.twist_fermion),
            "matrix": linalg::to_grid(&d.matrix()),
            "reduced_residuals": hexagon_reductions(&f.matrix, d),
        })
    };
    let conj = sol.canonical.conj();
    let mut out = json!({
        "canonical": describe(&sol.canonical),
        "conjugate": describe(&conj),
        "solutions": sol.solutions.iter().map(describe).collect::<Vec<_>>(),
        "hexagon": { "externals_checked": externals, "max_residual": max_residual },
    });
    if full {
        out["symbols"] = json!(r.to_json(&model));
    }
    Ok(out)
}

fn verify_gates(tol: f64) -> Outcome {
    let rep = DefectRepresentation::solved();
    let mut rows = Vec::new();
    let mut all = true;
    for g in gate_library() {
        let u = compile(&rep, &g.word)?;
        let eq = equiv_up_to_phase(&u, &g.reference_matrix, tol)?;
        all &= eq.equivalent;
        rows.push(json!({
            "name": g.name.to_string(),
            "word": g.word.to_string(),
            "fidelity": eq.fidelity,
            "passed": eq.equivalent,
        }));
    }
    let payload = json!({ "tol": tol, "gates": rows, "all_passed": all });
    if all {
        Ok(payload)
    } else {
        Err(Failure::new(
            "gate_mismatch",
            format!("some gates fall below fidelity 1 - {tol:e}"),
        )
        .with_payload(payload))
    }
}

fn seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::new(
                "parameter_error",
                format!("{SEED_VAR}=`{v}` is not an unsigned integer"),
            )
        }),
        Err(_) => Err(Failure::new(
            "parameter_error",
            format!("--samples needs a seed from --seed or {SEED_VAR}"),
        )),
    }
}

fn sample_counts(distribution: &[f64; 4], samples: u64, seed: u64) -> [u64; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0u64; 4];
    for _ in 0..samples {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut outcome = 3;
        for (i, p) in distribution.iter().enumerate() {
            acc += p;
            if u < acc {
                outcome = i;
                break;
            }
        }
        counts[outcome] += 1;
    }
    counts
}

fn gate_matches(u: &Mat4) -> Result<Vec<Value>, Failure> {
    let mut out = Vec::new();
    for g in gate_library() {
        let eq = equiv_up_to_phase(u, &g.reference_matrix, 1e-10)?;
        if eq.equivalent {
            out.push(json!({ "gate": g.name.to_string(), "fidelity": eq.fidelity }));
        }
    }
    Ok(out)
}

fn compile_word(
    text: &str,
    input: &str,
    want_measure: bool,
    samples: Option<u64>,
    seed_flag: Option<u64>,
    reference: Option<&str>,
) -> Outcome {
    let rep = DefectRepresentation::solved();
    let word = BraidWord::parse(text)?;
    let u = compile(&rep, &word)?;
    let mut out = json!({
        "word": word.to_string(),
        "crossings": word.crossings(),
        "unitary": braid::unitary_grid(&u),
        "matches": gate_matches(&u)?,
    });
    if let Some(name) = reference {
        let gate: GateName = name.parse()?;
        let eq = equiv_up_to_phase(&u, &gate.reference(), 1e-10)?;
        out["reference"] = json!(gate.to_string());
        out["fidelity"] = json!(eq.fidelity);
    }
    if want_measure || samples.is_some() {
        let initial = FusionBasisState::from_bits(input)?;
        let state = simulate(&rep, &word, &initial)?;
        let m = measure(&state);
        out["input"] = json!(input);
        out["state"] = json!(state.to_pairs());
        out["distribution"] = json!(m.distribution);
        if let Some(n) = samples {
            let s = seed(seed_flag)?;
            out["samples"] =
                json!({ "seed": s, "count": n, "counts": sample_counts(&m.distribution, n, s) });
        }
    }
    Ok(out)
}

fn grover(target: &str) -> Outcome {
    let index = FusionBasisState::from_bits(target)?
        .amplitudes
        .iter()
        .position(|z| z.norm() > 0.5)
        .expect("basis state has one nonzero amplitude");
    let rep = DefectRepresentation::solved();
    let run = braid::grover_braid_for(&rep, index)?;
    Ok(json!({
        "target": target,
        "word": run.word.to_string(),
        "crossings": run.word.crossings(),
        "distribution": run.measurement.distribution,
        "probability": run.measurement.distribution[index],
        "total": run.measurement.distribution.iter().sum::<f64>(),
    }))
}

fn parse_support(text: &str) -> Result<[usize; 5], Failure> {
    let sites: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            Failure::new(
                "parameter_error",
                format!("support `{text}` is not a list of site indices"),
            )
        })?;
    sites.try_into().map_err(|v: Vec<usize>| {
        Failure::new(
            "parameter_error",
            format!("support needs 5 sites, got {}", v.len()),
        )
    })
}

fn lattice_check(
    width: usize,
    height: usize,
    boundaries: &str,
    support: Option<&str>,
    dump: bool,
) -> Outcome {
    let tags: Boundaries = boundaries.parse()?;
    let lat = build_patch(width, height, tags)?;
    let (support, fixture) = match support {
        Some(text) => (parse_support(text)?, false),
        None => (lattice::junction_fixture_support(&lat)?, true),
    };
    let report = verify_defect(&lat, support)?;
    let mut out = json!({
        "width": width,
        "height": height,
        "boundaries": tags,
        "sites": lat.sites(),
        "vertex_stabilizers": lat.count(StabilizerKind::Vertex),
        "plaquette_stabilizers": lat.count(StabilizerKind::Plaquette),
        "stabilizers_commute": lat.noncommuting_pairs().is_empty(),
        "fixture": fixture,
        "support": support,
        "support_edges": support.iter().map(|&s| lat.edges[s]).collect::<Vec<_>>(),
        "operator": report.operator,
        "valid": report.is_valid(),
        "violations": report.violations,
    });
    if dump {
        out["stabilizers"] = json!(lat
            .stabilizers
            .iter()
            .map(|s| json!({ "kind": s.kind, "anchor": s.anchor, "operator": s.operator.to_string() }))
            .collect::<Vec<_>>());
    }
    Ok(out)
}

fn validate_model(path: &PathBuf, st_cubed: bool) -> Outcome {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new("io_error", format!("cannot read {}: {e}", path.display())))?;
    let model = AnyonModel::from_json_str(&text)?;
    let report = model.validate();
    let modular = match verify_modular_data(&model, ModularChecks { st_cubed }) {
        Ok(r) => Some(r),
        Err(Error::NoModularData) => None,
        Err(e) => return Err(e.into()),
    };
    let dims = if report.is_valid() {
        model.quantum_dimensions().ok()
    } else {
        None
    };
    let valid = report.is_valid() && modular.as_ref().is_none_or(|m| m.passed());
    let payload = json!({
        "path": path.display().to_string(),
        "labels": model.labels(),
        "valid": valid,
        "violations": report.violations,
        "quantum_dimensions": dims,
        "modular": modular,
    });
    if valid {
        Ok(payload)
    } else {
        Err(
            Failure::new("invalid_model", "model violates fusion or modular laws")
                .with_payload(payload),
        )
    }
}
