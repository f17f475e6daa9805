//! `nestcomb`: constructions and exact verifiers for nested set complexes
//! and Bier posets.
//!
//! Exit status: 0 when everything checked holds, 1 when a property is
//! falsified (the report with its witness is still printed), 2 on input
//! errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nestcomb::bier::{
    canonical_building_set, check_nested_conditions, sphere_report, verify_chain_bijection,
    verify_edge_subdivision, BierPoset,
};
use nestcomb::io::{
    complex_to_dot, hasse_to_dot, parse_building_members, parse_ideal, parse_poset,
    to_canonical_json, PosetFile,
};
use nestcomb::nested::{big_cut_condition, check_building_set, BuildingCheck};
use nestcomb::suite::{self, BierClaims};
use nestcomb::{BuildingSet, Error, Ideal, Poset, SimplicialComplex};

#[derive(Parser)]
#[command(name = "nestcomb", version)]
#[command(about = "Nested set complexes, subdivision sequences and Bier posets")]
struct Cli {
    /// Seed for randomised checks.
    #[arg(long, global = true, env = "NESTCOMB_SEED", default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a poset and report bounds, length and big cuts.
    PosetCheck(PosetArg),
    /// Order complex of a poset.
    OrderComplex(PosetArg),
    /// Check the building-set property and report factor sets.
    BuildingCheck(BuildingArgs),
    /// Nested set complex of a building set.
    NestedComplex(BuildingArgs),
    /// Add one element to a building set and compare both complexes.
    Extend {
        #[command(flatten)]
        building: BuildingArgs,
        #[arg(long)]
        x: String,
    },
    /// Grow a building set to the maximal one, step by step.
    Sequence(BuildingArgs),
    /// Build a Bier poset, optionally verifying one claim.
    Bier {
        #[command(flatten)]
        input: BierArgs,
        #[arg(long, value_enum)]
        verify: Option<BierClaim>,
    },
    /// Run a verifier on one instance or exhaustively.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct PosetArg {
    #[arg(long)]
    poset: PathBuf,
}

#[derive(Args)]
struct BuildingArgs {
    /// Overrides a poset embedded in the building-set file.
    #[arg(long)]
    poset: Option<PathBuf>,
    #[arg(long)]
    building: PathBuf,
}

#[derive(Args)]
struct BierArgs {
    #[arg(long)]
    poset: PathBuf,
    #[arg(long)]
    ideal: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BierClaim {
    /// Edge subdivisions of the proper part give the Bier complex.
    #[value(name = "edge-subdivision", alias = "thm42")]
    EdgeSubdivision,
    /// Nestedness agrees with the three comparability conditions.
    #[value(name = "nested-conditions", alias = "lem44")]
    NestedConditions,
    /// Nested sets map bijectively onto chains of the proper part.
    #[value(name = "chain-bijection", alias = "prop45")]
    ChainBijection,
    /// The canonical Bier building set is a building set.
    #[value(name = "building-set", alias = "prop43")]
    BuildingSet,
    Sphere,
    /// Growing the canonical building set gives only subdivisions.
    #[value(name = "sequence", alias = "seq")]
    Sequence,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Claim {
    /// Each extension step is a subdivision or a cone.
    #[value(name = "dichotomy", alias = "thm32")]
    Dichotomy,
    /// Full sequences end at the order complex; the big-cut condition forces
    /// subdivisions.
    #[value(name = "sequence", alias = "thm34")]
    Sequence,
    #[value(name = "bier-sequence", alias = "bier-seq")]
    BierSequence,
    #[value(name = "building-set", alias = "prop43")]
    BuildingSet,
    #[value(name = "nested-conditions", alias = "lem44")]
    NestedConditions,
    #[value(name = "chain-bijection", alias = "prop45")]
    ChainBijection,
    #[value(name = "edge-subdivision", alias = "thm42")]
    EdgeSubdivision,
    Sphere,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    claim: Claim,
    /// Enumerate all small instances instead of reading files.
    #[arg(long)]
    exhaustive: bool,
    /// Largest poset size for `--exhaustive` (default 6, or 7 for Bier claims).
    #[arg(long)]
    max_elements: Option<usize>,
    #[arg(long)]
    poset: Option<PathBuf>,
    #[arg(long)]
    building: Option<PathBuf>,
    #[arg(long)]
    ideal: Option<PathBuf>,
    /// Element to add for `dichotomy`; all candidates if omitted.
    #[arg(long)]
    x: Option<String>,
    /// Boolean lattice rank for `sphere` (default: every rank 2 to 5).
    #[arg(long)]
    n: Option<usize>,
    /// Random ideals per rank for `sphere`.
    #[arg(long, default_value_t = 20)]
    samples: usize,
}

/// What a command prints, and whether everything it checked held.
struct Outcome {
    text: String,
    holds: bool,
}

impl Outcome {
    fn json(value: Value, holds: bool) -> Self {
        Outcome {
            text: to_canonical_json(&value),
            holds,
        }
    }

    fn text(text: String) -> Self {
        Outcome { text, holds: true }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_poset(path: &Path) -> Result<Poset> {
    parse_poset(&read(path)?).with_context(|| format!("parsing poset {}", path.display()))
}

fn load_building(args_poset: Option<&Path>, building: &Path) -> Result<(Poset, Vec<usize>)> {
    let poset = args_poset.map(load_poset).transpose()?;
    parse_building_members(poset.as_ref(), &read(building)?)
        .with_context(|| format!("parsing building set {}", building.display()))
}

fn load_valid_building(args_poset: Option<&Path>, building: &Path) -> Result<BuildingSet> {
    let (p, members) = load_building(args_poset, building)?;
    Ok(BuildingSet::new(&p, &members)?)
}

fn load_ideal(poset: &Poset, path: &Path) -> Result<Ideal> {
    parse_ideal(poset, &read(path)?).with_context(|| format!("parsing ideal {}", path.display()))
}

fn value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialise")
}

fn sorted_labels(p: &Poset, xs: &[usize]) -> Vec<String> {
    let mut v = p.labels_of(xs);
    v.sort();
    v
}

fn complex_output(k: &SimplicialComplex, format: Format) -> Outcome {
    match format {
        Format::Json => Outcome::text(to_canonical_json(k)),
        Format::Dot => Outcome::text(complex_to_dot(k)),
    }
}

fn poset_check(p: &Poset) -> Outcome {
    let cuts: Vec<Value> = p
        .big_cuts()
        .iter()
        .map(|c| {
            json!({
                "antichain": sorted_labels(p, &c.antichain),
                "upper_bounds": sorted_labels(p, &c.upper_bounds),
            })
        })
        .collect();
    Outcome::json(
        json!({
            "poset": value(&PosetFile::from(p)),
            "least": p.least().map(|x| p.label(x)),
            "greatest": p.greatest().map(|x| p.label(x)),
            "bounded": p.is_bounded(),
            "length": p.length(),
            "linear_extension": p.labels_of(&p.linear_extension()),
            "big_cuts": cuts,
        }),
        true,
    )
}

fn building_check(p: &Poset, members: &[usize]) -> Result<Outcome> {
    let condition = big_cut_condition(p, members)?;
    Ok(match check_building_set(p, members)? {
        BuildingCheck::Valid(g) => {
            let mut factors = BTreeMap::new();
            for x in 0..p.len() {
                factors.insert(p.label(x).to_owned(), sorted_labels(p, g.factors(x)?));
            }
            Outcome::json(
                json!({
                    "valid": true,
                    "members": sorted_labels(p, members),
                    "factors": factors,
                    "big_cut_condition": condition,
                }),
                true,
            )
        }
        BuildingCheck::Invalid { element, factors } => Outcome::json(
            json!({
                "valid": false,
                "members": sorted_labels(p, members),
                "witness": {
                    "element": p.label(element),
                    "factors": sorted_labels(p, &factors),
                },
                "big_cut_condition": condition,
            }),
            false,
        ),
    })
}

fn extend_all(g: &BuildingSet, x: Option<&str>) -> Result<Outcome> {
    let p = g.poset();
    match x {
        Some(label) => {
            let r = g.extension_step(p.index_of(label)?)?;
            let holds = r.equal;
            Ok(Outcome::json(value(&r), holds))
        }
        None => {
            let reports = g
                .extension_candidates()
                .into_iter()
                .map(|x| g.extension_step(x))
                .collect::<nestcomb::Result<Vec<_>>>()?;
            let holds = reports.iter().all(|r| r.equal);
            Ok(Outcome::json(json!({ "steps": value(&reports) }), holds))
        }
    }
}

fn bier_claim(p: &Poset, ideal: &Ideal, claim: BierClaim, seed: u64) -> Result<Outcome> {
    if claim == BierClaim::EdgeSubdivision {
        let r = verify_edge_subdivision(p, ideal)?;
        let holds = r.passed();
        return Ok(Outcome::json(value(&r), holds));
    }
    if claim == BierClaim::Sphere {
        let r = sphere_report(p, ideal)?;
        let holds = r.passed();
        return Ok(Outcome::json(value(&r), holds));
    }
    let b = BierPoset::new(p, ideal)?;
    let g = canonical_building_set(&b)?;
    Ok(match claim {
        BierClaim::BuildingSet => Outcome::json(
            json!({ "valid": true, "members": sorted_labels(b.below_top(), g.members()) }),
            true,
        ),
        BierClaim::NestedConditions => {
            let r = check_nested_conditions(&b, &g, seed)?;
            let holds = r.passed();
            Outcome::json(value(&r), holds)
        }
        BierClaim::ChainBijection => {
            let r = verify_chain_bijection(&b, &g)?;
            let holds = r.bijective;
            Outcome::json(value(&r), holds)
        }
        BierClaim::Sequence => {
            let r = g.building_set().subdivision_sequence()?;
            let holds = r.passed() && r.all_subdivisions();
            Outcome::json(value(&r), holds)
        }
        BierClaim::EdgeSubdivision | BierClaim::Sphere => unreachable!("handled above"),
    })
}

fn bier_only(claim: Claim) -> Option<BierClaim> {
    match claim {
        Claim::BuildingSet => Some(BierClaim::BuildingSet),
        Claim::NestedConditions => Some(BierClaim::NestedConditions),
        Claim::ChainBijection => Some(BierClaim::ChainBijection),
        Claim::EdgeSubdivision => Some(BierClaim::EdgeSubdivision),
        Claim::Sphere => Some(BierClaim::Sphere),
        Claim::BierSequence => Some(BierClaim::Sequence),
        Claim::Dichotomy | Claim::Sequence => None,
    }
}

fn claims_for(claim: BierClaim) -> BierClaims {
    let none = BierClaims {
        building_set: true,
        nested_conditions: false,
        chain_bijection: false,
        edge_subdivision: false,
        tie_breaks: false,
        only_subdivisions: false,
    };
    match claim {
        BierClaim::BuildingSet | BierClaim::Sphere => none,
        BierClaim::NestedConditions => BierClaims {
            nested_conditions: true,
            ..none
        },
        BierClaim::ChainBijection => BierClaims {
            chain_bijection: true,
            ..none
        },
        BierClaim::EdgeSubdivision => BierClaims {
            edge_subdivision: true,
            tie_breaks: true,
            ..none
        },
        BierClaim::Sequence => BierClaims {
            only_subdivisions: true,
            ..none
        },
    }
}

fn verify(args: &VerifyArgs, seed: u64) -> Result<Outcome> {
    if args.claim == Claim::Sphere && args.poset.is_none() {
        let ranks: Vec<usize> = match args.n {
            Some(n) => vec![n],
            None => (2..=5).collect(),
        };
        let runs = ranks
            .into_iter()
            .map(|n| suite::sphere_suite(n, args.samples, seed))
            .collect::<nestcomb::Result<Vec<_>>>()?;
        let holds = runs.iter().all(|r| r.all_passed());
        return Ok(Outcome::json(json!({ "ranks": value(&runs) }), holds));
    }
    if args.exhaustive {
        return Ok(match (args.claim, bier_only(args.claim)) {
            (Claim::Dichotomy, _) => {
                let s = suite::dichotomy_exhaustive(args.max_elements.unwrap_or(6))?;
                let holds = s.passed();
                Outcome::json(value(&s), holds)
            }
            (Claim::Sequence, _) => {
                let s = suite::sequence_exhaustive(args.max_elements.unwrap_or(6))?;
                let holds = s.passed();
                Outcome::json(value(&s), holds)
            }
            (_, Some(c)) => {
                let s =
                    suite::bier_exhaustive(args.max_elements.unwrap_or(7), claims_for(c), seed)?;
                let holds = s.passed();
                Outcome::json(value(&s), holds)
            }
            (_, None) => unreachable!("every claim is covered"),
        });
    }
    match bier_only(args.claim) {
        None => {
            let Some(building) = &args.building else {
                bail!("--building is required unless --exhaustive is given");
            };
            let g = load_valid_building(args.poset.as_deref(), building)?;
            if args.claim == Claim::Dichotomy {
                return extend_all(&g, args.x.as_deref());
            }
            let r = g.subdivision_sequence()?;
            let holds = suite::sequence_consistent(&r);
            Ok(Outcome::json(value(&r), holds))
        }
        Some(c) => {
            let (Some(poset), Some(ideal)) = (&args.poset, &args.ideal) else {
                bail!("--poset and --ideal are required unless --exhaustive is given");
            };
            let p = load_poset(poset)?;
            let i = load_ideal(&p, ideal)?;
            bier_claim(&p, &i, c, seed)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let dot_capable = matches!(
        cli.command,
        Command::PosetCheck(_)
            | Command::OrderComplex(_)
            | Command::NestedComplex(_)
            | Command::Bier { verify: None, .. }
    );
    if cli.format == Format::Dot && !dot_capable {
        bail!("--format dot is only available for poset-check, order-complex, nested-complex and bier");
    }
    match &cli.command {
        Command::PosetCheck(a) => {
            let p = load_poset(&a.poset)?;
            Ok(match cli.format {
                Format::Json => poset_check(&p),
                Format::Dot => Outcome::text(hasse_to_dot(&p)),
            })
        }
        Command::OrderComplex(a) => {
            let p = load_poset(&a.poset)?;
            Ok(complex_output(
                &SimplicialComplex::order_complex(&p),
                cli.format,
            ))
        }
        Command::BuildingCheck(a) => {
            let (p, members) = load_building(a.poset.as_deref(), &a.building)?;
            building_check(&p, &members)
        }
        Command::NestedComplex(a) => {
            let g = load_valid_building(a.poset.as_deref(), &a.building)?;
            Ok(complex_output(&g.nested_complex(), cli.format))
        }
        Command::Extend { building, x } => {
            let g = load_valid_building(building.poset.as_deref(), &building.building)?;
            extend_all(&g, Some(x))
        }
        Command::Sequence(a) => {
            let g = load_valid_building(a.poset.as_deref(), &a.building)?;
            let r = g.subdivision_sequence()?;
            let holds = suite::sequence_consistent(&r);
            Ok(Outcome::json(value(&r), holds))
        }
        Command::Bier { input, verify } => {
            let p = load_poset(&input.poset)?;
            let i = load_ideal(&p, &input.ideal)?;
            match verify {
                Some(c) => bier_claim(&p, &i, *c, cli.seed),
                None => {
                    let b = BierPoset::new(&p, &i)?;
                    Ok(match cli.format {
                        Format::Json => Outcome::text(to_canonical_json(b.poset())),
                        Format::Dot => Outcome::text(hasse_to_dot(b.poset())),
                    })
                }
            }
        }
        Command::Verify(args) => verify(args, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => match e.downcast_ref::<Error>() {
            Some(Error::Falsified { claim, witness }) => {
                let report = json!({ "falsified": claim, "witness": witness });
                print!("{}", to_canonical_json(&report));
                ExitCode::from(1)
            }
            _ => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}
