//! blockframe CLI: factorization and frame predicates over JSON files.
//!
//! Exit codes: 0 = pass/solved, 1 = predicate false or unsolvable (with a
//! witness on stderr or in the report), 2 = usage or I/O error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use blockframe::error::Error;
use blockframe::factorization::{douglas_solve, mp_conditions_report, pseudoinverse, range_sum_check, range_sum_root};
use blockframe::frame_sums::sum_kframe_check;
use blockframe::frames::{atomic_system_check, kframe_check, AtomicOutcome, KFrameOutcome};
use blockframe::report::{Verdict, VerificationReport};
use blockframe::verify::{resolve_suite, verify_suite};
use blockframe::{io, Frame, Operator};

#[derive(Parser)]
#[command(name = "blockframe", version, about = "Operator factorization and K-frame verification over block matrix algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolArg {
    /// Verification tolerance; defaults to MF_DEFAULT_TOL or 1e-9.
    #[arg(long)]
    tol: Option<f64>,
}

impl TolArg {
    fn resolve(&self) -> Result<f64, Error> {
        if let Some(t) = self.tol {
            return Ok(t);
        }
        match std::env::var("MF_DEFAULT_TOL") {
            Ok(s) => s
                .parse::<f64>()
                .map_err(|_| Error::Usage(format!("MF_DEFAULT_TOL is not a number: {s}"))),
            Err(_) => Ok(1e-9),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Moore–Penrose pseudoinverse of an operator.
    Pinv {
        /// Input operator file.
        #[arg(long = "in")]
        input: String,
        /// Where to write the pseudoinverse.
        #[arg(long)]
        out: Option<String>,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Solve T = L·U when Ran(T) ⊆ Ran(L).
    Douglas {
        #[arg(long = "T")]
        t: String,
        #[arg(long = "L")]
        l: String,
        /// Where to write the factor U.
        #[arg(long)]
        out: Option<String>,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Range-sum identity Ran(T)+Ran(L) = Ran(√(TT*+LL*)).
    RangeSum {
        #[arg(long = "T")]
        t: String,
        #[arg(long = "L")]
        l: String,
        /// Where to write the square root operator.
        #[arg(long)]
        out: Option<String>,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Optimal K-frame bounds of a frame file against an operator K.
    KframeCheck {
        #[arg(long)]
        frame: String,
        #[arg(long = "K")]
        k: String,
        /// Where to write the verdict report.
        #[arg(long)]
        out: Option<String>,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Atomic-system certificate K = θ*∘Q.
    AtomicCheck {
        #[arg(long)]
        frame: String,
        #[arg(long = "K")]
        k: String,
        /// Where to write the coefficient map Q.
        #[arg(long)]
        out: Option<String>,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Ordinary frame bounds (spectral bounds of the frame operator).
    FrameBounds {
        #[arg(long)]
        frame: String,
        #[arg(long)]
        out: Option<String>,
        #[command(flatten)]
        tol: TolArg,
    },
    /// K-frame sum theorem on two frame files.
    SumCheck {
        #[arg(long)]
        frame: String,
        /// The second frame file.
        #[arg(long = "G")]
        second: String,
        #[arg(long = "K")]
        k: String,
        #[arg(long)]
        out: Option<String>,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Run theorem-verification suites on generated instances.
    Verify {
        /// Comma-separated tags, or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Instances per tag.
        #[arg(long, default_value_t = 4)]
        counts: usize,
        /// Where to write the aggregated report.
        #[arg(long)]
        report: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(predicate_true) => {
            if predicate_true {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Unsolvable { .. } | Error::Infeasible(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn write_report(path: &Option<String>, report: &VerificationReport) -> Result<(), Error> {
    if let Some(p) = path {
        io::save_value(p, &serde_json::to_value(report).expect("report serializes"))?;
    }
    Ok(())
}

fn run(command: Command) -> Result<bool, Error> {
    match command {
        Command::Pinv { input, out, tol } => {
            let tol = tol.resolve()?;
            let t: Operator = io::load_operator(&input)?;
            let tdag = pseudoinverse(&t);
            let report = mp_conditions_report(&t, &tdag, tol)?;
            if let Some(p) = out {
                io::save_operator(p, &tdag)?;
            }
            let worst = report
                .residuals
                .values()
                .fold(0.0_f64, |a, &b| a.max(b));
            println!(
                "pinv: {:?} (max residual {:.3e}, tol {:.1e})",
                report.verdict, worst, tol
            );
            Ok(report.passed())
        }
        Command::Douglas { t, l, out, tol } => {
            let tol = tol.resolve()?;
            let t: Operator = io::load_operator(&t)?;
            let l: Operator = io::load_operator(&l)?;
            let sol = douglas_solve(&t, &l, tol)?;
            if let Some(p) = out {
                io::save_operator(p, &sol.factor)?;
            }
            println!(
                "douglas: solved, residual {:.3e}, majorization constant {:.6}",
                sol.residual, sol.majorization_constant
            );
            Ok(true)
        }
        Command::RangeSum { t, l, out, tol } => {
            let tol = tol.resolve()?;
            let t: Operator = io::load_operator(&t)?;
            let l: Operator = io::load_operator(&l)?;
            let root = range_sum_root(&t, &l, tol)?;
            let report = range_sum_check(&t, &l, tol)?;
            if let Some(p) = out {
                io::save_operator(p, &root)?;
            }
            println!("range-sum: {:?}", report.verdict);
            Ok(report.passed())
        }
        Command::KframeCheck { frame, k, out, tol } => {
            let tol = tol.resolve()?;
            let f: Frame = io::load_frame(&frame)?;
            let k: Operator = io::load_operator(&k)?;
            match kframe_check(&f, &k, tol)? {
                KFrameOutcome::KFrame(b) => {
                    let report = VerificationReport::builder("kframe-check")
                        .info("lower", b.lower)
                        .info("upper", b.upper)
                        .finish();
                    write_report(&out, &report)?;
                    println!("kframe-check: pass (A = {:.6}, B = {:.6})", b.lower, b.upper);
                    Ok(true)
                }
                KFrameOutcome::NotKFrame { witness, deficiency } => {
                    let report = VerificationReport::builder("kframe-check")
                        .fail()
                        .info("deficiency", deficiency)
                        .witness("xi", io::vector_to_value(&witness))
                        .finish();
                    write_report(&out, &report)?;
                    eprintln!("kframe-check: fail (deficiency {deficiency:.3e})");
                    println!("kframe-check: fail");
                    Ok(false)
                }
            }
        }
        Command::AtomicCheck { frame, k, out, tol } => {
            let tol = tol.resolve()?;
            let f: Frame = io::load_frame(&frame)?;
            let k: Operator = io::load_operator(&k)?;
            match atomic_system_check(&f, &k, tol)? {
                AtomicOutcome::Atomic(cert) => {
                    if let Some(p) = out {
                        io::save_operator(p, &cert.coefficient_map)?;
                    }
                    println!("atomic-check: pass (coefficient bound {:.6})", cert.bound);
                    Ok(true)
                }
                AtomicOutcome::NotAtomic { block, column, residual } => {
                    eprintln!(
                        "atomic-check: fail (range inclusion violated at block {block}, column {column}, residual {residual:.3e})"
                    );
                    println!("atomic-check: fail");
                    Ok(false)
                }
            }
        }
        Command::FrameBounds { frame, out, tol } => {
            let tol = tol.resolve()?;
            let f: Frame = io::load_frame(&frame)?;
            let b = f.frame_bounds(tol);
            let report = VerificationReport::builder("frame-bounds")
                .info("lower", b.lower)
                .info("upper", b.upper)
                .info("is_frame", if b.is_frame { 1.0 } else { 0.0 })
                .info("tight", if b.tight { 1.0 } else { 0.0 })
                .info("parseval", if b.parseval { 1.0 } else { 0.0 })
                .finish();
            write_report(&out, &report)?;
            let kind = if b.is_frame { "frame" } else { "bessel-only" };
            println!(
                "frame-bounds: {kind} (C = {:.6}, D = {:.6}{}{})",
                b.lower,
                b.upper,
                if b.tight { ", tight" } else { "" },
                if b.parseval { ", parseval" } else { "" },
            );
            Ok(b.is_frame)
        }
        Command::SumCheck { frame, second, k, out, tol } => {
            let tol = tol.resolve()?;
            let f: Frame = io::load_frame(&frame)?;
            let g: Frame = io::load_frame(&second)?;
            let k: Operator = io::load_operator(&k)?;
            let report = sum_kframe_check(&f, &g, &k, tol)?;
            write_report(&out, &report)?;
            println!("sum-check: {:?}", report.verdict);
            Ok(report.verdict != Verdict::Fail)
        }
        Command::Verify { suite, seed, counts, report } => {
            let tags = resolve_suite(&suite)?;
            let entries = verify_suite(&tags, seed, counts)?;
            for tag in &tags {
                let (mut pass, mut fail, mut skipped) = (0, 0, 0);
                for e in entries.iter().filter(|e| &e.theorem_id == tag) {
                    match e.verdict {
                        Verdict::Pass => pass += 1,
                        Verdict::Fail => fail += 1,
                        Verdict::HypothesesNotMet => skipped += 1,
                    }
                }
                println!("{tag}: {pass} pass, {fail} fail, {skipped} hypotheses-not-met");
            }
            if let Some(p) = report {
                io::save_reports(p, &entries)?;
            }
            Ok(entries.iter().all(|e| e.verdict != Verdict::Fail))
        }
    }
}
