use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::process::ExitCode;

use perigraph_core::estimates::localization_table;
use perigraph_core::report::{fmt_real, minimal_form_report, validation_report};
use perigraph_core::spectral::{bands_csv, sample_grid};
use perigraph_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Common, MakeCommand};

const OMEGA_SAMPLES: usize = 32;

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: 1,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

fn usage(message: String) -> Failure {
    Failure { code: 2, message }
}

fn load(path: &Path) -> Result<FundamentalGraph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| usage(format!("cannot write output: {e}")))
        }
    }
}

fn sweep_opts(common: &Common) -> SweepOptions {
    SweepOptions {
        grid_n: common.grid,
        flat_tol: common.flat_tol,
    }
}

fn minimal(g: &FundamentalGraph, common: &Common) -> Result<MinimalFormResult, Failure> {
    Ok(minimal_form_with_cap(
        g,
        &OneForm::index_form(g),
        common.cap,
    )?)
}

fn ensure_connected(g: &FundamentalGraph) -> Result<(), Failure> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(Error::Disconnected.into())
    }
}

pub fn validate(file: &Path) -> Outcome {
    let g = load(file)?;
    let r = perigraph_core::validate(&g);
    emit(&validation_report(&r), None)?;
    Ok(if r.is_valid() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

pub fn invariant(file: &Path, common: &Common) -> Outcome {
    let g = load(file)?;
    ensure_connected(&g)?;
    emit(
        &minimal_form_report(&minimal(&g, common)?),
        common.out.as_deref(),
    )?;
    Ok(ExitCode::SUCCESS)
}

pub fn bands(file: &Path, common: &Common) -> Outcome {
    let g = load(file)?;
    ensure_connected(&g)?;
    let samples = sample_grid(&g, &OneForm::index_form(&g), common.grid)?;
    emit(&bands_csv(g.dim(), &samples), common.out.as_deref())?;
    if common.out.is_some() {
        let bands = BandStructure::from_samples(common.grid, &samples, common.flat_tol);
        emit(&bands.summary(), None)?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn spectrum(file: &Path, common: &Common) -> Outcome {
    let g = load(file)?;
    ensure_connected(&g)?;
    let inv = minimal(&g, common)?;
    let bands = band_sweep(&g, &inv.form, sweep_opts(common))?;
    let mut text = bands.summary();
    text.push_str(&measure_bound_check(&bands, &inv).line());
    text.push('\n');
    emit(&text, common.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn localize(file: &Path, common: &Common) -> Outcome {
    let g = load(file)?;
    ensure_connected(&g)?;
    let inv = minimal(&g, common)?;
    let bands = band_sweep(&g, &inv.form, sweep_opts(common))?;
    let loc = localization_intervals(&g, &inv.form, &bands)?;
    let mut text = format!("kappa_m_plus={}\n", loc.kappa_m_plus);
    text.push_str(&localization_table(
        &loc.mu,
        &loc.intervals,
        &bands,
        &loc.contained,
    ));
    text.push_str(&measure_bound_check(&bands, &inv).line());
    text.push('\n');
    if g.has_zero_potential() {
        let basis = normalize_basis(&g, &inv.form)?;
        text.push_str(&effective_mass(&basis.graph, &basis.form)?.line());
        text.push('\n');
    }
    emit(&text, common.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn dirichlet(file: &Path, common: &Common) -> Outcome {
    let g = load(file)?;
    ensure_connected(&g)?;
    let bands = band_sweep(&g, &OneForm::index_form(&g), sweep_opts(common))?;
    let r = dirichlet_localization(&g, &bands)?;
    let cover: Vec<String> = r.cover.iter().map(usize::to_string).collect();
    let dir: Vec<String> = r.mu_dirichlet.iter().map(|x| fmt_real(*x)).collect();
    let mut text = format!(
        "cover={}\nkappa_plus={}\nmu_dirichlet={}\n",
        cover.join(" "),
        r.kappa_plus,
        dir.join(" ")
    );
    text.push_str(&localization_table(
        &r.mu,
        &r.intervals,
        &bands,
        &r.contained,
    ));
    text.push_str(&format!("ok={}\n", r.all_contained()));
    emit(&text, common.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn effmass(file: &Path, common: &Common) -> Outcome {
    let g = load(file)?;
    ensure_connected(&g)?;
    let inv = minimal(&g, common)?;
    let basis = normalize_basis(&g, &inv.form)?;
    let em = effective_mass(&basis.graph, &basis.form)?;
    let mut text = em.line();
    text.push('\n');
    if let Some(seed) = common.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = g.dim();
        let mut within = 0;
        let (mut lo_gap, mut hi_gap) = (f64::INFINITY, f64::INFINITY);
        for _ in 0..OMEGA_SAMPLES {
            let raw: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = raw
                .iter()
                .map(|x| x * x)
                .sum::<f64>()
                .sqrt()
                .max(f64::MIN_POSITIVE);
            let w: Vec<f64> = raw.iter().map(|x| x / norm).collect();
            let mu = effective_form(&basis.graph, &basis.form, &w)?;
            let (lo, hi) = effective_form_bounds(&basis.graph, &basis.form, &w);
            lo_gap = lo_gap.min(mu - lo);
            hi_gap = hi_gap.min(hi - mu);
            if mu >= lo - 1e-9 && mu <= hi + 1e-9 {
                within += 1;
            }
        }
        text.push_str(&format!(
            "omega_samples={OMEGA_SAMPLES} within_bounds={within} min_lower_gap={} min_upper_gap={}\n",
            fmt_real(lo_gap),
            fmt_real(hi_gap)
        ));
    }
    emit(&text, common.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn construct(file: &Path, common: &Common) -> Outcome {
    let g = load(file)?;
    let m = OneForm::index_form(&g);
    let realized = realize_periodic_with_cap(&g, &m, common.cap)?;
    emit(&serialize_graph(&realized), common.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn make(which: &MakeCommand, out: Option<&Path>) -> Outcome {
    let g = match which {
        MakeCommand::Lattice { d } => make_lattice(*d)?,
        MakeCommand::Triangular => make_triangular(),
        MakeCommand::Hexagonal => make_hexagonal(),
        MakeCommand::Kagome => make_kagome(),
        MakeCommand::Decorated { d, g1, glue } => make_decorated(*d, &load(g1)?, *glue)?,
    };
    emit(&serialize_graph(&g), out)?;
    Ok(ExitCode::SUCCESS)
}
