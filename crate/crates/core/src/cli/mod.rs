//! The `errgroup` command line. Every subcommand is a thin shell over a
//! library call; [`run`] returns the exit code and both output streams so
//! the binary and the C ABI share it.

mod input;

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::codes::{
    classify_errors, correctable_set, detectable_span_dimension, idempotent_frame, induced_characters,
    inertia_subgroup, is_correctable_set, is_detectable, primitive_idempotents, recover, syndrome_frame, test_states,
    CodeKind, CodeSpace, SyndromeFrame,
};
use crate::error::{Error, Result};
use crate::error_basis::{
    egner_basis, egner_generators, gfpk_basis, pauli_basis, regular_representation, semidirect_basis, tensor_basis,
    verify_abstract_error_group, verify_nice, ErrorGroup,
};
use crate::gfpk::{
    check_dual_equality, gfpk_code_report, invariance_scan, quantum_code_from_pair, AdditiveCode, LinearCode,
};
use crate::groups::{find_isomorphism, CharacterTable, DEFAULT_CAP};
use crate::instances::{check_all, Instance};
use crate::transversal::{qubit_pair_candidates, transversal_ops, two_block_transversal, PairCandidate, TensorCandidate};
use crate::workspace::{canonical, Workspace};
use input::Context;

/// Environment variable overriding the group closure cap.
pub const CAP_ENV: &str = "ERRGROUP_CAP";

#[derive(Parser, Debug)]
#[command(name = "errgroup", version, about = "Nice error bases, error groups and character codes")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Directory of named objects; inputs may name objects stored there.
    #[arg(long, global = true)]
    workspace: Option<PathBuf>,
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also store the result in the workspace under this name.
    #[arg(long, global = true)]
    save: Option<String>,
    /// Largest group built by closure.
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build or check nice error bases.
    #[command(subcommand)]
    Basis(BasisCmd),
    /// Finite matrix groups and their structure.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Character codes of a normal subgroup.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Syndrome frames and recovery.
    #[command(subcommand)]
    Syndrome(SyndromeCmd),
    /// Codes over GF(p^k) and the quantum codes built from them.
    #[command(subcommand)]
    Classical(ClassicalCmd),
    /// Tensor-product operations preserving a code.
    #[command(subcommand)]
    Transversal(TransversalCmd),
    /// Invariant suites.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Args, Debug)]
struct FieldArgs {
    #[arg(short = 'p')]
    p: u64,
    #[arg(short = 'k', default_value_t = 1)]
    k: usize,
    /// Monic defining polynomial, coefficients low degree first.
    #[arg(long)]
    irreducible: Option<String>,
    /// Coefficients of the linear form b; defaults to the constant term.
    #[arg(long)]
    b: Option<String>,
}

#[derive(Subcommand, Debug)]
enum BasisCmd {
    /// Shift and clock matrices on C^p.
    Pauli {
        #[arg(short = 'p', default_value_t = 2)]
        p: u64,
    },
    /// Kronecker products of two bases.
    Tensor { left: String, right: String },
    /// Semidirect-product basis; PHI lists {"from", "to"} matrix pairs.
    Semidirect {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        phi: String,
    },
    /// The four-dimensional semidirect example with a non-abelian index
    /// group.
    Egner {
        /// Print the three generators instead of the basis.
        #[arg(long)]
        generators: bool,
    },
    /// `C_x D_y` over GF(p^k).
    Gfpk {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Check the basis axioms, or with --abstract look for a center-supported
    /// faithful irreducible character of a group.
    Verify {
        input: Option<String>,
        #[arg(long = "abstract")]
        abstract_group: bool,
    },
}

#[derive(Subcommand, Debug)]
enum GroupCmd {
    /// Close a basis or list of matrices into a group.
    Close {
        input: Option<String>,
        /// Add a primitive root of unity of this order times the identity.
        #[arg(long)]
        phase: Option<u64>,
    },
    Center { input: Option<String> },
    Quotient {
        input: Option<String>,
        #[arg(long)]
        by_center: bool,
        /// Generators of the normal subgroup to divide by.
        #[arg(long, conflicts_with = "by_center")]
        by: Option<String>,
    },
    Chartable { input: Option<String> },
    Isomorphic {
        input: Option<String>,
        /// A group name (q8, s3, z2xd8, zN, dN, klein) or a group input.
        #[arg(long)]
        with: String,
    },
}

#[derive(Args, Debug)]
struct Target {
    /// One of bitflip3, bell2, egner, gf4-demo, quaternion2.
    #[arg(long)]
    instance: Option<String>,
    /// {"group", "normal", "character"?, "syndrome_set"?, "local_dim"?}.
    #[arg(long)]
    setup: Option<String>,
}

#[derive(Subcommand, Debug)]
enum CodeCmd {
    Build {
        #[command(flatten)]
        target: Target,
    },
    Idempotents {
        #[command(flatten)]
        target: Target,
    },
    Detect {
        #[command(flatten)]
        target: Target,
        /// Ambient element index; without it every element is tested.
        #[arg(long)]
        element: Option<usize>,
        /// An explicit operator to test.
        #[arg(long, conflicts_with = "element")]
        error: Option<String>,
    },
    Correct {
        #[command(flatten)]
        target: Target,
        /// Ambient element indices; defaults to the instance's error set.
        #[arg(long)]
        elements: Option<String>,
    },
    Classify {
        #[command(flatten)]
        target: Target,
    },
    Dims {
        #[command(flatten)]
        target: Target,
    },
}

#[derive(Args, Debug)]
struct FrameArgs {
    #[command(flatten)]
    target: Target,
    /// Errors to correct as ambient indices; defaults to the instance's set.
    #[arg(long)]
    elements: Option<String>,
    /// Use the first idempotent code instead of the character code.
    #[arg(long)]
    idempotent: bool,
}

#[derive(Subcommand, Debug)]
enum SyndromeCmd {
    Frame {
        #[command(flatten)]
        frame: FrameArgs,
    },
    Recover {
        #[command(flatten)]
        frame: FrameArgs,
        /// Ambient index of the error applied.
        #[arg(long)]
        error: usize,
        /// Test state: logical basis vectors first, then their first
        /// superposition.
        #[arg(long, default_value_t = 0)]
        state: usize,
    },
    Correctable {
        #[command(flatten)]
        frame: FrameArgs,
    },
}

#[derive(Args, Debug)]
struct CodeInput {
    /// Code JSON; alternatively give -p, -k and --gen.
    input: Option<String>,
    #[arg(short = 'p')]
    p: Option<u64>,
    #[arg(short = 'k', default_value_t = 1)]
    k: usize,
    #[arg(long)]
    irreducible: Option<String>,
    /// Generator rows separated by ';', entries as element indices.
    #[arg(long)]
    gen: Option<String>,
    /// Word length when --gen is empty.
    #[arg(short = 'n')]
    n: Option<usize>,
    #[arg(long)]
    b: Option<String>,
}

#[derive(Subcommand, Debug)]
enum ClassicalCmd {
    Dual {
        #[command(flatten)]
        code: CodeInput,
    },
    Minweight {
        #[command(flatten)]
        code: CodeInput,
    },
    /// Quantum code from a nested pair of additive codes.
    Quantum {
        #[arg(long)]
        instance: Option<String>,
        #[arg(long)]
        outer: Option<String>,
        #[arg(long)]
        inner: Option<String>,
        #[arg(long)]
        b: Option<String>,
        /// First coset leader, as element indices.
        #[arg(long)]
        leader: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum TransversalCmd {
    Ops {
        #[command(flatten)]
        target: Target,
        /// [{"name", "factors": [matrix…], "matrix"?}]
        #[arg(long)]
        candidates: Option<String>,
    },
    TwoBlock {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        local_dim: Option<usize>,
        /// [{"name", "unitary"}]; defaults to identity, swap and
        /// controlled-X on qubits.
        #[arg(long)]
        pairs: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum CheckCmd {
    All {
        #[arg(long)]
        instance: String,
    },
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn cap_from_env() -> Result<Option<usize>> {
    match std::env::var(CAP_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidArgument(format!("{CAP_ENV} must be a positive integer"))),
        Err(_) => Ok(None),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    return Outcome {
                        code: 0,
                        stdout: text,
                        stderr: String::new(),
                    }
                }
                _ => 2,
            };
            return Outcome {
                code,
                stdout: String::new(),
                stderr: text,
            };
        }
    };
    match execute(cli, stdin) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: 1,
            stdout: canonical(&e.to_json()),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn execute(cli: Cli, stdin: &mut dyn Read) -> Result<String> {
    let g = cli.global;
    let cap = match g.cap {
        Some(c) => c,
        None => cap_from_env()?.unwrap_or(DEFAULT_CAP),
    };
    let workspace = g.workspace.as_ref().map(Workspace::open).transpose()?;
    let mut ctx = Context {
        workspace,
        cap,
        seed: g.seed,
        stdin,
    };
    let (kind, value) = dispatch(cli.command, &mut ctx)?;
    if let Some(name) = &g.save {
        let ws = ctx
            .workspace
            .as_mut()
            .ok_or_else(|| Error::Workspace("--save needs --workspace".into()))?;
        ws.save(name, kind, &value)?;
    }
    let text = canonical(&value);
    match g.out {
        Some(path) => {
            std::fs::write(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn dispatch(cmd: Command, ctx: &mut Context) -> Result<(&'static str, Value)> {
    match cmd {
        Command::Basis(c) => basis(c, ctx),
        Command::Group(c) => group(c, ctx),
        Command::Code(c) => code(c, ctx),
        Command::Syndrome(c) => syndrome(c, ctx),
        Command::Classical(c) => classical(c, ctx),
        Command::Transversal(c) => transversal(c, ctx),
        Command::Check(CheckCmd::All { instance }) => {
            let inst = Instance::by_name(&instance, ctx.cap)?;
            Ok(("report", check_all(&inst, ctx.seed)?))
        }
    }
}

fn basis(cmd: BasisCmd, ctx: &mut Context) -> Result<(&'static str, Value)> {
    let b = match cmd {
        BasisCmd::Pauli { p } => pauli_basis(p)?,
        BasisCmd::Tensor { left, right } => {
            let l = ctx.basis(Some(&left))?;
            let r = ctx.basis(Some(&right))?;
            tensor_basis(&l, &r)?
        }
        BasisCmd::Semidirect { left, right, phi } => {
            let l = ErrorGroup::from_basis(&ctx.basis(Some(&left))?, None, ctx.cap)?;
            let r = ErrorGroup::from_basis(&ctx.basis(Some(&right))?, None, ctx.cap)?;
            let v = ctx.load(Some(&phi))?;
            let pairs = v
                .as_array()
                .ok_or_else(|| Error::InvalidArgument("phi must be a list".into()))?
                .iter()
                .map(|e| Ok((input::matrix(&e["from"])?, input::matrix(&e["to"])?)))
                .collect::<Result<Vec<_>>>()?;
            semidirect_basis(&l, &r, &pairs)?
        }
        BasisCmd::Egner { generators: true } => {
            let gens: Vec<Value> = egner_generators().iter().map(|m| m.to_json()).collect();
            return Ok(("matrices", Value::Array(gens)));
        }
        BasisCmd::Egner { generators: false } => egner_basis()?,
        BasisCmd::Gfpk { field } => {
            let f = input::field(field.p, field.k, field.irreducible.as_deref())?;
            let b = input::form(&f, field.b.as_deref())?;
            gfpk_basis(&f, &b)?
        }
        BasisCmd::Verify {
            input,
            abstract_group: true,
        } => {
            let g = match input.as_deref().map(crate::groups::named::by_name) {
                Some(Ok(a)) => regular_representation(&a)?,
                _ => ctx.group(input.as_deref())?,
            };
            let v = match verify_abstract_error_group(&g)? {
                Some(ev) => {
                    let mut v = ev.to_json();
                    v["abstract_error_group"] = json!(true);
                    v["basis_report"] = ev.basis.as_ref().map(|b| verify_nice(b).to_json()).into();
                    v
                }
                None => json!({ "abstract_error_group": false, "order": g.order() }),
            };
            return Ok(("report", v));
        }
        BasisCmd::Verify { input, .. } => {
            let b = ctx.basis(input.as_deref())?;
            return Ok(("report", verify_nice(&b).to_json()));
        }
    };
    Ok(("basis", b.to_json()))
}

fn group(cmd: GroupCmd, ctx: &mut Context) -> Result<(&'static str, Value)> {
    match cmd {
        GroupCmd::Close { input, phase } => {
            let v = ctx.load(input.as_deref())?;
            let mut g = input::to_group(&v, ctx.cap)?;
            if let Some(m) = phase {
                let mut gens = g.elements().to_vec();
                gens.push(crate::cyclo::CycMatrix::scalar(
                    g.dim(),
                    &crate::cyclo::CycScalar::root_of_unity(m, 1),
                ));
                gens.retain(|x| !x.is_identity());
                g = crate::groups::FiniteMatrixGroup::close(&gens, ctx.cap)?;
            }
            Ok(("group", g.to_json()))
        }
        GroupCmd::Center { input } => {
            let v = ctx.load(input.as_deref())?;
            if v.get("elements").is_some() || v.get("table").is_none() {
                let g = input::to_group(&v, ctx.cap)?;
                let center = g.center();
                return Ok((
                    "report",
                    json!({ "order": g.order(), "center": center, "scalar": g.center_is_scalar() }),
                ));
            }
            let a = crate::groups::AbstractGroup::from_json(&v)?;
            Ok(("report", json!({ "order": a.order(), "center": a.center() })))
        }
        GroupCmd::Quotient { input, by_center, by } => {
            let a = ctx.abstract_group(input.as_deref())?;
            let n = match (by_center, by) {
                (true, _) => a.center(),
                (false, Some(s)) => a.normal_closure(&input::indices(&s)?),
                (false, None) => return Err(Error::InvalidArgument("give --by-center or --by".into())),
            };
            let q = a.quotient(&n)?;
            let mut v = q.group.to_json();
            v["reps"] = json!(q.reps);
            v["coset_of"] = json!(q.coset_of);
            Ok(("abstract_group", v))
        }
        GroupCmd::Chartable { input } => {
            let a = ctx.abstract_group(input.as_deref())?;
            Ok(("character_table", CharacterTable::compute(&a)?.to_json()))
        }
        GroupCmd::Isomorphic { input, with } => {
            let a = ctx.abstract_group(input.as_deref())?;
            let b = ctx.abstract_group(Some(&with))?;
            Ok(("report", json!(find_isomorphism(&a, &b)?.is_some())))
        }
    }
}

fn elements_arg(inst: &Instance, s: Option<&str>) -> Result<Option<Vec<usize>>> {
    let set = match s {
        Some(s) => Some(input::indices(s)?),
        None => inst.syndrome_set.clone(),
    };
    if let Some(bad) = set.iter().flatten().find(|&&g| g >= inst.group.order()) {
        return Err(Error::InvalidArgument(format!("element {bad} is out of range")));
    }
    Ok(set)
}

fn idempotent_code(inst: &Instance, seed: u64) -> Result<Option<(Vec<crate::cyclo::CycMatrix>, CodeSpace)>> {
    let split = primitive_idempotents(&inst.normal, inst.character, seed)?;
    match split.exact() {
        Some(e) if e.len() > 1 => {
            let code = CodeSpace::from_projector(e[0].clone(), CodeKind::Idempotent(0), json!({ "idempotent": 0 }))?;
            Ok(Some((e, code)))
        }
        _ => Ok(None),
    }
}

fn code(cmd: CodeCmd, ctx: &mut Context) -> Result<(&'static str, Value)> {
    let target = match &cmd {
        CodeCmd::Build { target }
        | CodeCmd::Idempotents { target }
        | CodeCmd::Detect { target, .. }
        | CodeCmd::Correct { target, .. }
        | CodeCmd::Classify { target }
        | CodeCmd::Dims { target } => target,
    };
    let inst = ctx.instance(target.instance.as_deref(), target.setup.as_deref())?;
    let code = inst.code()?;
    match cmd {
        CodeCmd::Build { .. } => Ok(("code", code.to_json())),
        CodeCmd::Idempotents { .. } => Ok((
            "idempotents",
            primitive_idempotents(&inst.normal, inst.character, ctx.seed)?.to_json(),
        )),
        CodeCmd::Detect { element, error, .. } => {
            let single = match (element, error) {
                (Some(g), _) => Some(
                    inst.group
                        .elements()
                        .get(g)
                        .cloned()
                        .ok_or_else(|| Error::InvalidArgument(format!("element {g} is out of range")))?,
                ),
                (None, Some(e)) => Some(input::matrix(&ctx.load(Some(&e))?)?),
                (None, None) => None,
            };
            match single {
                Some(m) => {
                    let lambda = is_detectable(&code, &m)?;
                    Ok((
                        "report",
                        json!({ "detectable": lambda.is_some(), "lambda": lambda.map(|l| l.to_json()) }),
                    ))
                }
                None => {
                    let mut detected = Vec::new();
                    for (i, m) in inst.group.elements().iter().enumerate() {
                        if is_detectable(&code, m)?.is_some() {
                            detected.push(i);
                        }
                    }
                    Ok((
                        "report",
                        json!({ "elements": inst.group.order(), "count": detected.len(), "detectable": detected }),
                    ))
                }
            }
        }
        CodeCmd::Correct { elements, .. } => {
            let set = elements_arg(&inst, elements.as_deref())?
                .ok_or_else(|| Error::InvalidArgument("give --elements".into()))?;
            let mats: Vec<_> = set.iter().map(|&g| inst.group.element(g).clone()).collect();
            let mut v = is_correctable_set(&code, &mats)?.to_json();
            v["elements"] = json!(set);
            Ok(("report", v))
        }
        CodeCmd::Classify { .. } => {
            let inertia = inertia_subgroup(&inst.normal, inst.character)?;
            let idem = idempotent_code(&inst, ctx.seed)?;
            let c = classify_errors(&inst.normal, &inertia, &code, idem.as_ref().map(|(_, c)| c))?;
            Ok(("report", c.to_json()))
        }
        CodeCmd::Dims { .. } => {
            let inertia = inertia_subgroup(&inst.normal, inst.character)?;
            let induced = induced_characters(&inst.normal)?;
            let r = detectable_span_dimension(&inst.normal, &inertia, &code, &induced)?;
            Ok(("report", r.to_json()))
        }
    }
}

fn frame(args: &FrameArgs, ctx: &mut Context) -> Result<(Instance, SyndromeFrame)> {
    let inst = ctx.instance(args.target.instance.as_deref(), args.target.setup.as_deref())?;
    let set = elements_arg(&inst, args.elements.as_deref())?;
    let mats: Option<Vec<_>> = set.map(|s| s.iter().map(|&g| inst.group.element(g).clone()).collect());
    let inertia = inertia_subgroup(&inst.normal, inst.character)?;
    let f = if args.idempotent {
        let (e, _) = idempotent_code(&inst, ctx.seed)?
            .ok_or_else(|| Error::InvalidArgument("the character code does not split into idempotent codes".into()))?;
        idempotent_frame(&inst.normal, &inertia, &e, mats.as_deref())?
    } else {
        syndrome_frame(&inst.normal, &inertia, &inst.code()?, mats.as_deref())?
    };
    Ok((inst, f))
}

fn syndrome(cmd: SyndromeCmd, ctx: &mut Context) -> Result<(&'static str, Value)> {
    match cmd {
        SyndromeCmd::Frame { frame: args } => {
            let (_, f) = frame(&args, ctx)?;
            Ok(("frame", f.to_json()))
        }
        SyndromeCmd::Recover { frame: args, error, state } => {
            let (inst, f) = frame(&args, ctx)?;
            let states = test_states(&f.code)?;
            let psi = states
                .get(state)
                .ok_or_else(|| Error::InvalidArgument(format!("state {state} out of range (0..{})", states.len())))?;
            let e = inst
                .group
                .elements()
                .get(error)
                .ok_or_else(|| Error::InvalidArgument(format!("element {error} is out of range")))?;
            let branches = recover(&f, &e.mul_vec(psi)?)?;
            let restored = branches
                .iter()
                .all(|b| crate::codes::phase_between(&b.state, psi).is_some());
            Ok((
                "report",
                json!({
                    "error": error,
                    "state": state,
                    "branches": branches.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
                    "restored": restored,
                }),
            ))
        }
        SyndromeCmd::Correctable { frame: args } => {
            let (inst, f) = frame(&args, ctx)?;
            Ok(("report", correctable_set(&inst.normal, &f)?.to_json()))
        }
    }
}

fn linear_code(c: &CodeInput, ctx: &mut Context) -> Result<LinearCode> {
    match (c.p, &c.input) {
        (Some(p), None) => {
            let f = input::field(p, c.k, c.irreducible.as_deref())?;
            let rows = input::words(&f, c.gen.as_deref().unwrap_or(""))?;
            let n = match (rows.first(), c.n) {
                (Some(r), _) => r.len(),
                (None, Some(n)) => n,
                (None, None) => return Err(Error::InvalidArgument("give -n for an empty generator".into())),
            };
            LinearCode::new(f, n, rows)
        }
        (None, input) => LinearCode::from_json(&ctx.load(input.as_deref())?),
        (Some(_), Some(_)) => Err(Error::InvalidArgument("give either a code file or -p".into())),
    }
}

fn classical(cmd: ClassicalCmd, ctx: &mut Context) -> Result<(&'static str, Value)> {
    match cmd {
        ClassicalCmd::Dual { code } => {
            let c = linear_code(&code, ctx)?;
            let b = input::form(c.field(), code.b.as_deref())?;
            let dual = c.dual();
            let dual_b = c.dual_b(&b)?;
            let equal = check_dual_equality(&c, &b)?;
            Ok((
                "report",
                json!({ "code": c.to_json(), "dual": dual.to_json(), "dual_b": dual_b.to_json(), "equal": equal }),
            ))
        }
        ClassicalCmd::Minweight { code } => {
            let c = linear_code(&code, ctx)?;
            Ok((
                "report",
                json!({ "n": c.len(), "dim": c.dim(), "min_weight": c.min_weight()? }),
            ))
        }
        ClassicalCmd::Quantum {
            instance,
            outer,
            inner,
            b,
            leader,
        } => {
            let pc = match (instance, outer, inner) {
                (Some(name), None, None) => Instance::by_name(&name, ctx.cap)?
                    .pair
                    .ok_or_else(|| Error::InvalidArgument(format!("instance {name} has no code pair")))?,
                (None, Some(o), Some(i)) => {
                    let outer = AdditiveCode::from_json(&ctx.load(Some(&o))?)?;
                    let inner = AdditiveCode::from_json(&ctx.load(Some(&i))?)?;
                    let form = input::form(outer.field(), b.as_deref())?;
                    let lead = leader
                        .as_deref()
                        .map(|s| input::words(outer.field(), s))
                        .transpose()?
                        .and_then(|mut w| w.pop());
                    quantum_code_from_pair(&outer, &inner, &form, lead)?
                }
                _ => return Err(Error::InvalidArgument("give --instance, or --outer and --inner".into())),
            };
            let report = gfpk_code_report(&pc)?;
            let scan = match invariance_scan(&pc) {
                Ok(s) => s.to_json(&pc.field),
                Err(Error::CodeTooLarge(m)) => json!({ "skipped": m }),
                Err(e) => return Err(e),
            };
            Ok((
                "report",
                json!({ "pair": pc.to_json(), "report": report.to_json(&pc.field), "invariance": scan }),
            ))
        }
    }
}

fn transversal(cmd: TransversalCmd, ctx: &mut Context) -> Result<(&'static str, Value)> {
    match cmd {
        TransversalCmd::Ops { target, candidates } => {
            let inst = ctx.instance(target.instance.as_deref(), target.setup.as_deref())?;
            let mut extras = inst.candidates.clone();
            if let Some(c) = candidates {
                let v = ctx.load(Some(&c))?;
                for (i, e) in v
                    .as_array()
                    .ok_or_else(|| Error::InvalidArgument("candidates must be a list".into()))?
                    .iter()
                    .enumerate()
                {
                    let name = e["name"].as_str().map(String::from).unwrap_or_else(|| format!("candidate{i}"));
                    let mut cand = TensorCandidate::new(name, input::matrices(&e["factors"])?);
                    if !e["matrix"].is_null() {
                        cand.claimed = Some(input::matrix(&e["matrix"])?);
                    }
                    extras.push(cand);
                }
            }
            let r = transversal_ops(&inst.normal, inst.character, &inst.code()?, inst.local_dim, &extras)?;
            Ok(("report", r.to_json()))
        }
        TransversalCmd::TwoBlock {
            target,
            local_dim,
            pairs,
        } => {
            let inst = ctx.instance(target.instance.as_deref(), target.setup.as_deref())?;
            let d = local_dim
                .or(inst.local_dim)
                .ok_or_else(|| Error::InvalidArgument("give --local-dim".into()))?;
            let cands = match pairs {
                Some(p) => ctx
                    .load(Some(&p))?
                    .as_array()
                    .ok_or_else(|| Error::InvalidArgument("pairs must be a list".into()))?
                    .iter()
                    .enumerate()
                    .map(|(i, e)| {
                        let name = e["name"].as_str().map(String::from).unwrap_or_else(|| format!("pair{i}"));
                        Ok(PairCandidate::new(name, input::matrix(&e["unitary"])?))
                    })
                    .collect::<Result<Vec<_>>>()?,
                None if d == 2 => qubit_pair_candidates(),
                None => return Err(Error::InvalidArgument("give --pairs for non-qubit subsystems".into())),
            };
            let r = two_block_transversal(&inst.normal, inst.character, &inst.code()?, d, &cands)?;
            Ok(("report", r.to_json()))
        }
    }
}
