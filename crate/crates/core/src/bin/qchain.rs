use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qchain::config::{parse_config, parse_override, SweepConfig};
use qchain::eigensolve::{eigh, eigvalsh};
use qchain::emit::{self, Field, Table};
use qchain::metrics::{coupling_census, npc_profile, Basis, Representation};
use qchain::model::{
    build_interaction_terms, build_mean_field_hamiltonian, build_quasi_integrable, build_z_hamiltonian, MeanFieldData,
};
use qchain::spectral::{band_snapshot, identify_bands};
use qchain::sweep::{self, run_sweep};
use qchain::{theory, Error, Result};

/// Exact diagonalization of driven Ising qubit chains.
#[derive(Parser)]
#[command(name = "qchain", version)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct Common {
    /// `key = value` configuration file.
    #[arg(long, short = 'c', global = true)]
    config: Option<PathBuf>,
    /// Override one configuration key; repeatable, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    /// Number of qubits.
    #[arg(short = 'L', global = true)]
    l: Option<String>,
    /// Ising coupling scale.
    #[arg(short = 'J', global = true)]
    j: Option<String>,
    /// Rabi frequency.
    #[arg(long, global = true)]
    omega: Option<String>,
    /// Coupling family: N, NN, A or custom.
    #[arg(long, global = true)]
    coupling: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long, short = 'o', global = true)]
    output: Option<String>,
    /// csv or jsonl.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Replace an existing output file.
    #[arg(long, global = true)]
    overwrite: bool,
    /// Lift the default 14-qubit ceiling.
    #[arg(long, global = true)]
    allow_large: bool,
}

#[derive(Subcommand)]
enum Verb {
    /// Dump a Hamiltonian as `row col re im` triplets.
    Matrix {
        #[arg(long, value_enum, default_value_t = MatrixKind::Z)]
        basis: MatrixKind,
        #[command(flatten)]
        common: Common,
    },
    /// All eigenvalues in ascending order.
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
    /// Band structure; with `values` set, the central band across the grid.
    Bands {
        #[command(flatten)]
        common: Common,
    },
    /// Level-spacing histogram of the central band.
    Spacing {
        #[command(flatten)]
        common: Common,
    },
    /// `N_pc` and `σ` of each eigenstate.
    States {
        #[arg(long, value_enum, default_value_t = RepresentationArg::MeanField)]
        basis: RepresentationArg,
        /// Every state instead of the central band only.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Directly coupled central-band states in the mean-field basis.
    Census {
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form border estimates.
    Theory {
        /// Aligned text instead of CSV/JSONL.
        #[arg(long)]
        text: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run the configured sweep.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixKind {
    Z,
    MeanField,
    Interaction,
    QuasiIntegrable,
}

#[derive(Clone, Copy, ValueEnum)]
enum RepresentationArg {
    Z,
    MeanField,
}

impl Common {
    fn load(&self) -> Result<SweepConfig> {
        let text = match &self.config {
            Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Io { path: p.clone(), source: e })?,
            None => String::new(),
        };
        let mut overrides = Vec::new();
        for (k, v) in [
            ("L", &self.l),
            ("J", &self.j),
            ("omega", &self.omega),
            ("coupling", &self.coupling),
            ("output", &self.output),
            ("format", &self.format),
        ] {
            if let Some(v) = v {
                overrides.push((k.to_string(), v.clone()));
            }
        }
        if self.overwrite {
            overrides.push(("overwrite".into(), "true".into()));
        }
        if self.allow_large {
            overrides.push(("allow_large".into(), "true".into()));
        }
        for s in &self.set {
            overrides.push(parse_override(s)?);
        }
        parse_config(&text, &overrides)
    }
}

fn table(cfg: &SweepConfig, columns: &[&str]) -> Table {
    Table::new(cfg.echo().to_vec(), columns.iter().map(|c| c.to_string()).collect())
}

fn run(verb: Verb) -> Result<()> {
    match verb {
        Verb::Matrix { basis, common } => {
            let cfg = common.load()?;
            let p = cfg.base.build()?;
            let h = match basis {
                MatrixKind::Z => build_z_hamiltonian(&p),
                MatrixKind::MeanField => build_mean_field_hamiltonian(&p, &MeanFieldData::new(&p)),
                MatrixKind::Interaction => build_interaction_terms(&p, &MeanFieldData::new(&p)).total(),
                MatrixKind::QuasiIntegrable => build_quasi_integrable(&p, &MeanFieldData::new(&p))?,
            };
            let mut bytes = Vec::new();
            h.write_triplets(&mut bytes, cfg.analysis.threshold).expect("writing to memory");
            match cfg.output.resolved_path() {
                Some(path) => emit::write_atomic(&path, &bytes, cfg.output.overwrite),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(&bytes).map_err(|e| Error::Io { path: "<stdout>".into(), source: e })
                }
            }
        }
        Verb::Spectrum { common } => {
            let cfg = common.load()?;
            let p = cfg.base.build()?;
            let e = eigvalsh(&build_z_hamiltonian(&p))?;
            let mut t = table(&cfg, &["index", "energy"]);
            for (i, x) in e.iter().enumerate() {
                t.push(vec![i.into(), (*x).into()]);
            }
            emit::write_output(&t, &cfg.output)
        }
        Verb::Bands { common } => {
            let cfg = common.load()?;
            if cfg.values.is_empty() {
                let p = cfg.base.build()?;
                let e = eigvalsh(&build_z_hamiltonian(&p))?;
                let central = band_snapshot(&e, p.omega()).central;
                let mut t = table(&cfg, &["band", "population", "e_min", "e_max", "band_width", "central"]);
                for (i, b) in identify_bands(&e, p.omega()).iter().enumerate() {
                    t.push(vec![i.into(), b.population().into(), b.e_min.into(), b.e_max.into(), b.width().into(), (*b == central).into()]);
                }
                return emit::write_output(&t, &cfg.output);
            }
            let mut c = cfg.clone();
            c.observables = vec![qchain::config::Observable::Bands];
            let rows = run_sweep(&c)?;
            let mut t = table(&cfg, &["grid_value", "band_width", "e_min", "e_max", "band_count", "error"]);
            for r in rows.iter().filter(|r| r.ensemble_index == Some(0)) {
                let v = |k: &str| Field::from(r.value(k));
                t.push(vec![r.grid_value.into(), v("band_width"), v("e_min"), v("e_max"), v("band_count"), r.error.clone().into()]);
            }
            emit::write_output(&t, &cfg.output)
        }
        Verb::Spacing { common } => {
            let cfg = common.load()?;
            let mut c = cfg.clone();
            c.observables = vec![qchain::config::Observable::Spacing];
            let rows = run_sweep(&c)?;
            let (summary, bins) = if cfg.ensemble > 1 {
                ("spacing_pooled", "spacing_pooled_bin")
            } else {
                ("spacing", "spacing_bin")
            };
            for r in rows.iter().filter(|r| r.observable == summary) {
                match &r.error {
                    Some(e) => eprintln!("grid value {}: {e}", r.grid_value),
                    None => eprintln!(
                        "grid value {}: samples {} d_poisson {:.4} d_wigner_dyson {:.4} small_s_fraction {:.4}",
                        r.grid_value,
                        r.value("samples").unwrap_or(0.0),
                        r.value("d_poisson").unwrap_or(f64::NAN),
                        r.value("d_wigner_dyson").unwrap_or(f64::NAN),
                        r.value("small_s_fraction").unwrap_or(f64::NAN),
                    ),
                }
            }
            let mut t = table(&cfg, &["grid_value", "bin_lo", "bin_hi", "density"]);
            for r in rows.iter().filter(|r| r.observable == bins) {
                t.push(vec![r.grid_value.into(), r.value("bin_lo").into(), r.value("bin_hi").into(), r.value("density").into()]);
            }
            if t.rows.is_empty() {
                if let Some(e) = rows.iter().find_map(|r| r.error.clone()) {
                    return Err(Error::InvalidParams(e));
                }
            }
            emit::write_output(&t, &cfg.output)
        }
        Verb::States { basis, all, common } => {
            let cfg = common.load()?;
            let p = cfg.base.build()?;
            let spec = eigh(&build_z_hamiltonian(&p))?;
            let mf = MeanFieldData::new(&p);
            let b = match basis {
                RepresentationArg::Z => Basis::AsComputed(Representation::Z),
                RepresentationArg::MeanField => Basis::ZToMeanField(&mf),
            };
            let central = band_snapshot(spec.eigenvalues(), p.omega()).central;
            let mut t = table(&cfg, &["index", "energy", "npc", "sigma"]);
            for s in npc_profile(&spec, b)?.into_iter().filter(|s| all || central.contains(s.index)) {
                t.push(vec![s.index.into(), s.energy.into(), s.npc.into(), s.sigma.into()]);
            }
            emit::write_output(&t, &cfg.output)
        }
        Verb::Census { common } => {
            let cfg = common.load()?;
            let p = cfg.base.build()?;
            let mf = MeanFieldData::new(&p);
            let h = build_mean_field_hamiltonian(&p, &mf);
            let c = coupling_census(&h, &mf.unperturbed_energies(), p.omega(), cfg.analysis.threshold)?;
            let mut t = table(&cfg, &["band_states", "m_f", "delta_e_f", "d_f"]);
            t.push(vec![c.band_states.into(), c.m_f.into(), c.delta_e_f.into(), c.d_f.into()]);
            emit::write_output(&t, &cfg.output)
        }
        Verb::Theory { text, common } => {
            let cfg = common.load()?;
            let p = cfg.base.build()?;
            let rows = theory::estimate(&p).rows();
            if text {
                let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in rows {
                    println!("{k:<width$}  {v:.6e}");
                }
                return Ok(());
            }
            let mut t = table(&cfg, &["quantity", "value"]);
            for (k, v) in rows {
                t.push(vec![k.into(), v.into()]);
            }
            emit::write_output(&t, &cfg.output)
        }
        Verb::Sweep { common } => {
            let cfg = common.load()?;
            let rows = run_sweep(&cfg)?;
            let failed = rows.iter().filter(|r| r.error.is_some()).count();
            if failed > 0 {
                eprintln!("{failed} of {} rows record a failure", rows.len());
            }
            emit::write_output(&sweep::to_table(&cfg, &rows), &cfg.output)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => 3,
        e if e.is_numerical() => 2,
        Error::NotNormalized { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.verb) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qchain: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
