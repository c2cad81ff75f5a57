//! Command-line surface. The binary stays thin: argument parsing and
//! formatting live here, every computation goes through the library.
//!
//! Exit codes: 0 success / property holds; 1 property fails or a suite row
//! fails (a witness is printed); 2 usage or parse errors; 3 undecided within
//! the configured budgets.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::bounds;
use crate::builtin;
use crate::catalog;
use crate::field::field_condition;
use crate::graph::{is_primitive, orbital_graphs};
use crate::group::PermutationGroup;
use crate::report::{self, Report};
use crate::reproduce::{self, RowStatus};
use crate::semigroup::{self, PartialTransformation};
use crate::subset::k_subset_orbits;
use crate::ut::{self, ThresholdValue};
use crate::{Error, Limits};

#[derive(Parser)]
#[command(
    name = "transversal",
    about = "Universal transversal properties of permutation groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for the parallel search phases.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct GroupArg {
    /// Builtin registry name such as cyclic:5, agl1:7, psl2:11, pgammal2:32.
    #[arg(long, conflicts_with = "file", conflicts_with = "catalog")]
    builtin: Option<String>,
    /// Path to a generator file (see data/*.grp for the format).
    #[arg(long)]
    file: Option<PathBuf>,
    /// Bundled catalog id such as m11_12, sp6_2, co3.
    #[arg(long)]
    catalog: Option<String>,
    /// Override the bundled data directory.
    #[arg(long)]
    data_dir: Option<PathBuf>,
}

impl GroupArg {
    fn load(&self) -> Result<(PermutationGroup, String), Error> {
        match (&self.builtin, &self.file, &self.catalog) {
            (Some(spec), None, None) => Ok((builtin::from_registry(spec)?, spec.clone())),
            (None, Some(path), None) => Ok((
                builtin::from_file(path)?,
                path.display().to_string(),
            )),
            (None, None, Some(id)) => Ok((
                catalog::load(id, self.data_dir.as_deref())?,
                id.clone(),
            )),
            _ => Err(Error::InvalidArgument(
                "specify exactly one of --builtin, --file, --catalog".into(),
            )),
        }
    }
}

#[derive(Args)]
struct BudgetArgs {
    /// Per-probe work cap (orbit members × partitions).
    #[arg(long)]
    max_work: Option<u128>,
    /// Cap on subset-orbit enumeration.
    #[arg(long)]
    max_orbit: Option<u64>,
    /// Cap on semigroup closure size.
    #[arg(long)]
    cap: Option<usize>,
}

impl BudgetArgs {
    fn limits(&self) -> Limits {
        let mut limits = Limits::default();
        if let Some(w) = self.max_work {
            limits.max_work = w;
        }
        if let Some(o) = self.max_orbit {
            limits.max_orbit = o;
        }
        if let Some(c) = self.cap {
            limits.closure_cap = c;
        }
        limits
    }
}

#[derive(Subcommand)]
enum Command {
    /// Order, transitivity, primitivity, homogeneity degrees, and orbital
    /// graph valencies.
    Analyze {
        #[command(flatten)]
        group: GroupArg,
        /// Check k-homogeneity for k up to this bound.
        #[arg(long, default_value_t = 5)]
        kmax: usize,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Decide the (k,l)-universal transversal property.
    Ut {
        #[command(flatten)]
        group: GroupArg,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        l: usize,
        #[arg(long)]
        json: bool,
        /// Re-validate a printed witness by exhaustive scan.
        #[arg(long)]
        check_witness: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Compute the threshold t(G,k).
    Threshold {
        #[command(flatten)]
        group: GroupArg,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Lower/upper bounds on t(G,k) with provenance.
    Bounds {
        #[command(flatten)]
        group: GroupArg,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Regularity of ⟨G,t⟩ for a partial transformation t, or for a whole
    /// rank/domain-size class.
    Regular {
        #[command(flatten)]
        group: GroupArg,
        /// A map in the text form `dom: 0 1 3 ; img: 2 2 4`.
        #[arg(long, conflicts_with = "class")]
        map: Option<String>,
        /// Read the map from a file instead.
        #[arg(long, conflicts_with = "map", conflicts_with = "class")]
        map_file: Option<PathBuf>,
        /// A class `k,l`: rank k maps on domains of size l.
        #[arg(long)]
        class: Option<String>,
        /// Sweep the whole class (orbit representatives); without this a
        /// class argument only reports the instance count.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check computed values against a bundled expected-value suite:
    /// core-small, bounds-large, or field-conditions.
    Reproduce {
        suite: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        data_dir: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Evaluate the multiplicative generation condition over GF(q).
    Field {
        q: u64,
        #[arg(long)]
        json: bool,
    },
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // Ignore failure: the global pool can only be set once.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Analyze {
            group,
            kmax,
            json,
            budget,
        } => analyze(group, kmax, json, budget.limits()),
        Command::Ut {
            group,
            k,
            l,
            json,
            check_witness,
            budget,
        } => ut_cmd(group, k, l, json, check_witness, budget.limits()),
        Command::Threshold {
            group,
            k,
            json,
            budget,
        } => threshold_cmd(group, k, json, budget.limits()),
        Command::Bounds {
            group,
            k,
            json,
            budget,
        } => bounds_cmd(group, k, json, budget.limits()),
        Command::Regular {
            group,
            map,
            map_file,
            class,
            exhaustive,
            json,
            budget,
        } => regular_cmd(group, map, map_file, class, exhaustive, json, budget.limits()),
        Command::Reproduce {
            suite,
            json,
            data_dir,
            budget,
        } => reproduce_cmd(&suite, json, data_dir, budget.limits()),
        Command::Field { q, json } => field_cmd(q, json),
    }
}

fn analyze(garg: GroupArg, kmax: usize, json: bool, limits: Limits) -> Result<ExitCode, Error> {
    let start = Instant::now();
    let (group, name) = garg.load()?;
    let mut rep = Report::for_group(&group, Some(name.clone()));
    rep.transitive = Some(group.is_transitive());
    rep.primitive = Some(is_primitive(&group));
    let graphs = orbital_graphs(&group);
    rep.orbital_valencies = Some(graphs.iter().filter_map(|g| g.valency).collect());
    let mut homogeneity = Vec::new();
    for k in 1..=kmax.min(group.degree()) {
        match ut::is_k_homogeneous(&group, k, &limits) {
            Ok(true) => homogeneity.push(k),
            Ok(false) => {}
            Err(Error::BudgetExceeded { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    rep.homogeneity = Some(homogeneity);
    rep.timing_ms = start.elapsed().as_millis();
    if json {
        println!("{}", serde_json::to_string_pretty(&rep)?);
    } else {
        println!("group       {name}");
        println!("degree      {}", rep.degree);
        println!("order       {}", rep.order);
        println!("transitive  {}", rep.transitive.unwrap());
        println!("primitive   {}", rep.primitive.unwrap());
        println!("homogeneous for k ∈ {:?}", rep.homogeneity.as_ref().unwrap());
        println!("orbital valencies {:?}", rep.orbital_valencies.as_ref().unwrap());
        println!("({} ms)", rep.timing_ms);
    }
    Ok(ExitCode::SUCCESS)
}

fn ut_cmd(
    garg: GroupArg,
    k: usize,
    l: usize,
    json: bool,
    check_witness: bool,
    limits: Limits,
) -> Result<ExitCode, Error> {
    let start = Instant::now();
    let (group, name) = garg.load()?;
    let result = match ut::has_kl_ut(&group, k, l, &limits) {
        Ok(r) => r,
        Err(Error::BudgetExceeded { estimate, budget, context }) => {
            eprintln!("undecided: work estimate {estimate} exceeds budget {budget} ({context})");
            return Ok(ExitCode::from(3));
        }
        Err(e) => return Err(e),
    };
    let orbits = k_subset_orbits(&group, k, &limits)?;
    let mut rep = Report::for_group(&group, Some(name.clone()));
    rep.k = Some(k);
    rep.l = Some(l);
    report::attach_ut(&mut rep, &orbits, &result);
    rep.timing_ms = start.elapsed().as_millis();
    if check_witness {
        if let Some(w) = &rep.witness {
            let ok = report::check_witness(&orbits, w)?;
            eprintln!(
                "witness re-validation: {}",
                if ok { "confirmed" } else { "REJECTED" }
            );
            if !ok {
                return Ok(ExitCode::from(2));
            }
        }
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&rep)?);
    } else if result.holds {
        println!("({k},{l})-ut HOLDS for {name} ({} ms)", rep.timing_ms);
    } else {
        let w = rep.witness.as_ref().unwrap();
        println!("({k},{l})-ut FAILS for {name} ({} ms)", rep.timing_ms);
        println!(
            "witness: orbit {} (representative {:?}) has no transversal of {:?}",
            w.orbit.id, w.orbit.representative, w.blocks
        );
    }
    Ok(if result.holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn threshold_cmd(garg: GroupArg, k: usize, json: bool, limits: Limits) -> Result<ExitCode, Error> {
    let start = Instant::now();
    let (group, name) = garg.load()?;
    let result = ut::threshold(&group, k, &limits)?;
    let mut rep = Report::for_group(&group, Some(name.clone()));
    rep.k = Some(k);
    rep.threshold = Some(report::threshold_json(&result));
    rep.timing_ms = start.elapsed().as_millis();
    if json {
        println!("{}", serde_json::to_string_pretty(&rep)?);
    } else {
        match result.value {
            ThresholdValue::Exact(t) => println!(
                "t({name}, {k}) = {t}   [method: {}] ({} ms)",
                result.method.as_str(),
                rep.timing_ms
            ),
            ThresholdValue::NoThreshold => {
                println!("{name} does not have the ({k},n)-ut property: no threshold")
            }
            ThresholdValue::Undecided { lo, hi } => {
                println!("undecided within budget: t({name}, {k}) ∈ [{lo}, {hi}]")
            }
        }
    }
    Ok(match result.value {
        ThresholdValue::Undecided { .. } => ExitCode::from(3),
        _ => ExitCode::SUCCESS,
    })
}

fn bounds_cmd(garg: GroupArg, k: usize, json: bool, limits: Limits) -> Result<ExitCode, Error> {
    let start = Instant::now();
    let (group, name) = garg.load()?;
    let certified = garg
        .catalog
        .as_deref()
        .and_then(catalog::entry)
        .is_some_and(|e| e.certified_two_graph);
    let report = bounds::bound_report(&group, k, &limits, certified)?;
    let mut rep = Report::for_group(&group, Some(name.clone()));
    rep.k = Some(k);
    rep.bounds = Some(report::bounds_json(&report));
    rep.timing_ms = start.elapsed().as_millis();
    if json {
        println!("{}", serde_json::to_string_pretty(&rep)?);
    } else {
        let b = rep.bounds.as_ref().unwrap();
        match b.upper {
            Some(u) => println!(
                "t({name}, {k}) ∈ [{}, {}]   sources: {:?}{} ({} ms)",
                b.lower,
                u,
                b.sources,
                if b.conditional { " [upper bound conditional]" } else { "" },
                rep.timing_ms
            ),
            None => println!(
                "t({name}, {k}) ≥ {}   sources: {:?} ({} ms)",
                b.lower, b.sources, rep.timing_ms
            ),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn regular_cmd(
    garg: GroupArg,
    map: Option<String>,
    map_file: Option<PathBuf>,
    class: Option<String>,
    exhaustive: bool,
    json: bool,
    limits: Limits,
) -> Result<ExitCode, Error> {
    let start = Instant::now();
    let (group, name) = garg.load()?;
    let n = group.degree();

    if let Some(class) = class {
        let (k, l) = class
            .split_once(',')
            .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
            .ok_or_else(|| Error::InvalidArgument("class must be `k,l`".into()))?;
        if !exhaustive {
            return Err(Error::InvalidArgument(
                "class sweeps need --exhaustive".into(),
            ));
        }
        let harness = semigroup::equivalence_harness(&group, k, l, &limits)?;
        let all_regular = harness.irregular.is_empty();
        if json {
            let mut rep = Report::for_group(&group, Some(name.clone()));
            rep.k = Some(k);
            rep.l = Some(l);
            rep.regular = Some(all_regular);
            rep.holds = Some(harness.ut_holds);
            rep.timing_ms = start.elapsed().as_millis();
            println!("{}", serde_json::to_string_pretty(&rep)?);
        } else {
            println!(
                "class ({k},{l}) over {name}: {} instances, {}; ({k},{l})-ut {}; consistent: {}",
                harness.instances,
                if all_regular {
                    "all ⟨G,t⟩ regular".to_string()
                } else {
                    format!("{} non-regular", harness.irregular.len())
                },
                if harness.ut_holds { "holds" } else { "fails" },
                harness.consistent
            );
            for t in harness.irregular.iter().take(3) {
                println!("  non-regular instance: {t}");
            }
        }
        if !harness.consistent {
            eprintln!("internal inconsistency between the ut decision and regularity");
            return Ok(ExitCode::from(2));
        }
        return Ok(if all_regular {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        });
    }

    let text = match (map, map_file) {
        (Some(t), None) => t,
        (None, Some(p)) => std::fs::read_to_string(p)?,
        _ => {
            return Err(Error::InvalidArgument(
                "specify one of --map, --map-file, --class".into(),
            ))
        }
    };
    let t = PartialTransformation::parse(text.trim(), n)?;
    let verdict = semigroup::semigroup_regular(&group, &t, &limits)?;
    let regular = verdict.is_regular();
    if json {
        let mut rep = Report::for_group(&group, Some(name.clone()));
        rep.regular = Some(regular);
        rep.timing_ms = start.elapsed().as_millis();
        println!("{}", serde_json::to_string_pretty(&rep)?);
    } else {
        match &verdict {
            semigroup::Regularity::Regular => println!("⟨{name}, t⟩ is regular"),
            semigroup::Regularity::NotRegular { witness } => {
                println!("⟨{name}, t⟩ is NOT regular");
                println!("witness element: {witness}");
            }
        }
    }
    Ok(if regular {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn reproduce_cmd(
    suite: &str,
    json: bool,
    data_dir: Option<PathBuf>,
    limits: Limits,
) -> Result<ExitCode, Error> {
    let report = reproduce::run_suite(suite, &limits, data_dir.as_deref())?;
    if json {
        let rows: Vec<serde_json::Value> = report
            .rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "group": r.group,
                    "label": r.label,
                    "expected": r.expected,
                    "computed": r.computed,
                    "status": match &r.status {
                        RowStatus::Pass => "PASS".to_string(),
                        RowStatus::Fail => "FAIL".to_string(),
                        RowStatus::Skipped(why) => format!("SKIPPED: {why}"),
                    },
                    "provenance": r.provenance,
                    "timing_ms": r.millis,
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "suite": report.suite,
                "rows": rows,
                "passed": report.passed(),
            }))?
        );
    } else {
        println!("suite {}", report.suite);
        for r in &report.rows {
            let status = match &r.status {
                RowStatus::Pass => "PASS".to_string(),
                RowStatus::Fail => "FAIL".to_string(),
                RowStatus::Skipped(why) => format!("SKIPPED ({why})"),
            };
            println!(
                "{status:<9} {:<40} expected {:<12} computed {:<12} [{} ms]",
                r.label, r.expected, r.computed, r.millis
            );
        }
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn field_cmd(q: u64, json: bool) -> Result<ExitCode, Error> {
    let rep = field_condition(q)?;
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "q": rep.q,
                "holds": rep.holds,
                "failing": rep.failing,
            }))?
        );
    } else if rep.holds {
        println!("q = {q}: every c generates the full multiplicative group");
    } else {
        println!("q = {q}: fails for c ∈ {:?}", rep.failing);
    }
    Ok(if rep.holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
