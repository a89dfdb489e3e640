use std::str::FromStr;

use modlin_core::arith::{is_probable_prime, PrimePowerFactorization};
use modlin_core::bezout::{bezout_byte, bezout_single, OpCounts};
use modlin_core::crt::{factorize_fallback, solve_mod_n, solve_mod_n_constrained, CrtSolution};
use modlin_core::fieldsolve::{
    dot, kernel_basis, particular_solution, solve_field_constrained, unique_case_check, Field, FieldError,
    FieldMatrix, PrimeField, Rationals,
};
use modlin_core::modsolve::{solve_constrained, solve_modular, verify_solution, SolveError};
use modlin_core::smith::{smith_form, smith_form_augmented};
use modlin_core::{BigInt, SmithDecomposition};

use crate::problem::{parse_factor_list, FieldSpec, ProblemFile};
use crate::report::{join, matrix, parse_vector, Report};

pub const EXIT_SOLVED: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NO_SOLUTION: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        source: crate::problem::ParseError,
    },
    #[error("{0}")]
    Input(String),
}

pub struct Output {
    /// Printed verbatim before the report.
    pub lead: Option<String>,
    pub report: Report,
    pub code: i32,
}

impl Output {
    fn new(report: Report, code: i32) -> Self {
        Output { lead: None, report, code }
    }

    fn solved(report: Report) -> Self {
        Output::new(report, EXIT_SOLVED)
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub factors: Option<String>,
    pub factor_bound: Option<BigInt>,
    pub emit_certificates: bool,
    pub jobs: usize,
    pub direct: bool,
    pub list_residues: bool,
}

fn modulus(problem: &ProblemFile) -> Result<&BigInt, CliError> {
    problem
        .modulus
        .as_ref()
        .ok_or_else(|| CliError::Input("problem file has no 'modulus' line".into()))
}

/// `--factors` wins over the file's `factors` line; otherwise factor `n`
/// up to the bound.
fn resolve_factors(problem: &ProblemFile, opts: &SolveOptions) -> Result<PrimePowerFactorization, CliError> {
    let n = modulus(problem)?;
    if let Some(text) = &opts.factors {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let list = parse_factor_list(&tokens).map_err(|m| CliError::Input(format!("--factors: {m}")))?;
        return PrimePowerFactorization::new(list, n).map_err(|e| CliError::Input(format!("--factors: {e}")));
    }
    if let Some(f) = &problem.factors {
        return Ok(f.clone());
    }
    let bound = opts.factor_bound.clone().unwrap_or_else(modlin_core::crt::default_factor_bound);
    factorize_fallback(n, &bound).map_err(|e| CliError::Input(e.to_string()))
}

fn verification_line(problem: &ProblemFile, n: &BigInt, x: &[BigInt]) -> (bool, String) {
    let w = problem.w.as_deref();
    let ok = verify_solution(&problem.a, &problem.b, w, n, x);
    let mut line = format!("Ax≡b mod {n}");
    if w.is_some() {
        line.push_str(&format!(", gcd(φ,{n})=1"));
    }
    if ok {
        (true, line)
    } else {
        (false, format!("FAILED ({line})"))
    }
}

fn ops_line(ops: &OpCounts) -> String {
    format!(
        "inversions_mod_p={} digit_mults={} carries={} general_divisions={}",
        ops.inversions, ops.digit_mults, ops.carries, ops.general_divisions
    )
}

fn push_certificate(report: &mut Report, label: &str, d: &SmithDecomposition) {
    report.push(format!("certificate[{label}].P"), matrix(&d.p));
    report.push(format!("certificate[{label}].Q"), matrix(&d.q));
    report.push(format!("certificate[{label}].S"), matrix(&d.s));
}

fn no_solution(mut report: Report, err: &SolveError) -> Output {
    report.push("status", "no-solution");
    if let Some(cause) = err.infeasible() {
        if let Some(p) = cause.prime() {
            report.push("prime", p);
        }
    }
    let cause = err.infeasible().map_or_else(|| err.to_string(), ToString::to_string);
    report.push("cause", cause);
    Output::new(report, EXIT_NO_SOLUTION)
}

fn solve_error(report: Report, err: SolveError) -> Result<Output, CliError> {
    match err {
        SolveError::NoSolution(_) => Ok(no_solution(report, &err)),
        other => Err(CliError::Input(other.to_string())),
    }
}

fn finish(mut report: Report, problem: &ProblemFile, n: &BigInt, x: &[BigInt]) -> Output {
    let (ok, line) = verification_line(problem, n, x);
    report.push("x", join(x));
    report.push("verified", line);
    Output::new(report, if ok { EXIT_SOLVED } else { EXIT_INPUT })
}

pub fn cmd_solve(problem: &ProblemFile, opts: &SolveOptions) -> Result<Output, CliError> {
    let n = modulus(problem)?;
    let factors = resolve_factors(problem, opts)?;
    let mut report = Report::new();
    report.push("modulus", n);
    report.push("factors", &factors);
    report.push("constraint", if problem.w.is_some() { "gcd(<w,x>, n) = 1" } else { "none" });

    if opts.direct {
        report.push("method", "direct");
        let desc = match solve_modular(&problem.a, &problem.b, n) {
            Ok(d) => d,
            Err(e) => return solve_error(report, e),
        };
        let x = match &problem.w {
            Some(w) => match solve_constrained(&problem.a, &problem.b, w, n, &factors) {
                Ok(x) => x,
                Err(e) => return solve_error(report, e),
            },
            None => desc.particular.clone(),
        };
        report.push("status", "solved");
        report.push("unique", desc.is_unique());
        if opts.emit_certificates {
            push_certificate(&mut report, &n.to_string(), &desc.decomposition);
        }
        return Ok(finish(report, problem, n, &x));
    }

    report.push("method", "crt");
    let result: Result<CrtSolution, SolveError> = match &problem.w {
        Some(w) => solve_mod_n_constrained(&problem.a, &problem.b, w, n, &factors, opts.jobs),
        None => solve_mod_n(&problem.a, &problem.b, n, &factors, opts.jobs),
    };
    let sol = match result {
        Ok(s) => s,
        Err(e) => return solve_error(report, e),
    };
    report.push("status", "solved");
    let mut ops = OpCounts::default();
    for r in &sol.residues {
        ops += r.ops;
        let label = format!("{}^{}", r.p, r.r);
        if opts.list_residues {
            let mut value = format!("x={}", join(&r.x));
            if let Some(ok) = r.constraint_ok {
                value.push_str(&format!(" constraint_ok={ok}"));
            }
            value.push_str(&format!(" inversions_mod_p={}", r.ops.inversions));
            report.push(format!("residue[{label}]"), value);
        }
        if opts.emit_certificates {
            push_certificate(&mut report, &label, &r.decomposition);
        }
    }
    report.push(
        "ops",
        ops_line(&ops),
    );
    Ok(finish(report, problem, n, &sol.x))
}

pub fn cmd_smith(problem: &ProblemFile) -> Output {
    let d = smith_form(&problem.a);
    let mut report = Report::new();
    report.push("rank", d.rank);
    report.push("factors", join(&d.invariant_factors));
    report.push("P", matrix(&d.p));
    report.push("Q", matrix(&d.q));
    report.push("S", matrix(&d.s));
    report.push("verified", if d.verify(&problem.a) { "PAQ=S, |det P|=|det Q|=1, f_i | f_i+1" } else { "FAILED" });
    if let Some(n) = &problem.modulus {
        let aug = smith_form_augmented(&problem.a.reduce_mod(n), n);
        report.push("augmented_factors", join(&aug.invariant_factors));
    }
    let code = if d.verify(&problem.a) { EXIT_SOLVED } else { EXIT_INPUT };
    Output::new(report, code)
}

fn parse_arg<T: FromStr>(name: &str, s: &str) -> Result<T, CliError> {
    s.parse()
        .map_err(|_| CliError::Input(format!("{name}: '{s}' is not a valid value")))
}

pub fn cmd_bezout(a: &str, p: &str, r: &str, byte: Option<u64>, emit: bool) -> Result<Output, CliError> {
    let a: BigInt = parse_arg("a", a)?;
    let p: BigInt = parse_arg("p", p)?;
    let r: u64 = parse_arg("r", r)?;
    if !is_probable_prime(&p) {
        return Err(CliError::Input(format!("p: {p} is not prime")));
    }
    let mut report = Report::new();
    let (cert, line) = match byte {
        None => {
            let c = bezout_single(&a, &p, r);
            let line = format!("x={} y={} g={}, inversions_mod_p={}", c.x, c.y, c.g, c.ops.inversions);
            (c, line)
        }
        Some(d) => {
            let out = bezout_byte(&a, &p, d, r).map_err(|e| CliError::Input(e.to_string()))?;
            let c = out.cert;
            let line = format!(
                "x={} y={} q={} s={} stripped={}, inversions_mod_p={}",
                c.x, c.y, out.q, out.s, out.stripped, c.ops.inversions
            );
            (c, line)
        }
    };
    if emit {
        report.push("a", &cert.a);
        report.push("modulus", &cert.modulus);
        report.push("identity", format!("{} * {} + {} * {} = {}", cert.a, cert.x, cert.modulus, cert.y, cert.g));
        report.push("y_residue", &cert.y_residue);
        report.push("correction", &cert.correction);
        report.push(
            "ops",
            ops_line(&cert.ops),
        );
        report.push("verified", cert.holds());
    }
    let code = if cert.holds() { EXIT_SOLVED } else { EXIT_INPUT };
    Ok(Output {
        lead: Some(line),
        report,
        code,
    })
}

fn field_run<F: Field>(field: &F, problem: &ProblemFile, mut report: Report) -> Output {
    let a = FieldMatrix::from_int(field, &problem.a);
    let b: Vec<F::Elem> = problem.b.iter().map(|v| field.from_int(v)).collect();
    let Some(w) = &problem.w else {
        return match particular_solution(field, &a, &b) {
            Some(x) => {
                report.push("status", "solved");
                report.push("kernel_dimension", kernel_basis(field, &a).len());
                report.push("x", join(&x));
                report.push("verified", if a.mul_vec(field, &x) == b { "Ax=b" } else { "FAILED" });
                Output::solved(report)
            }
            None => {
                report.push("status", "no-solution");
                report.push("condition", 1);
                report.push("cause", FieldError::Inconsistent);
                Output::new(report, EXIT_NO_SOLUTION)
            }
        };
    };
    let w: Vec<F::Elem> = w.iter().map(|v| field.from_int(v)).collect();
    match unique_case_check(field, &a, &b, &w) {
        Ok(flag) => {
            report.push("unique_case", flag);
        }
        Err(FieldError::NontrivialKernel(d)) => {
            report.push("kernel_dimension", d);
        }
        Err(_) => {}
    }
    match solve_field_constrained(field, &a, &b, &w) {
        Ok(x) => {
            let phi = dot(field, &w, &x);
            let ok = a.mul_vec(field, &x) == b && !field.is_zero(&phi);
            report.push("status", "solved");
            report.push("x", join(&x));
            report.push("phi", &phi);
            report.push("verified", if ok { "Ax=b, <w,x>≠0" } else { "FAILED" });
            Output::new(report, if ok { EXIT_SOLVED } else { EXIT_INPUT })
        }
        Err(e) => {
            let condition = match e {
                FieldError::Inconsistent => 1,
                _ => 2,
            };
            report.push("status", "no-solution");
            report.push("condition", condition);
            report.push("cause", e);
            Output::new(report, EXIT_NO_SOLUTION)
        }
    }
}

pub fn cmd_field(problem: &ProblemFile, override_field: Option<FieldSpec>) -> Result<Output, CliError> {
    let spec = override_field
        .or_else(|| problem.field.clone())
        .ok_or_else(|| CliError::Input("no field given: add 'field prime P' or 'field rational', or pass --field".into()))?;
    let mut report = Report::new();
    report.push("field", &spec);
    Ok(match spec {
        FieldSpec::Rational => field_run(&Rationals, problem, report),
        FieldSpec::Prime(p) => {
            let f = PrimeField::new(&p).map_err(|e| CliError::Input(e.to_string()))?;
            field_run(&f, problem, report)
        }
    })
}

fn field_verify<F: Field>(field: &F, problem: &ProblemFile, x: &[F::Elem]) -> bool {
    let a = FieldMatrix::from_int(field, &problem.a);
    let b: Vec<F::Elem> = problem.b.iter().map(|v| field.from_int(v)).collect();
    let w_ok = problem.w.as_ref().is_none_or(|w| {
        let w: Vec<F::Elem> = w.iter().map(|v| field.from_int(v)).collect();
        !field.is_zero(&dot(field, &w, x))
    });
    x.len() == problem.a.cols() && a.mul_vec(field, x) == b && w_ok
}

/// Re-checks a report against its problem. Solutions are substituted back;
/// nonexistence claims are re-derived with the direct solver.
pub fn cmd_verify(problem: &ProblemFile, report_text: &str, opts: &SolveOptions) -> Result<Output, CliError> {
    let claimed = Report::parse(report_text).map_err(CliError::Input)?;
    let status = claimed
        .get("status")
        .ok_or_else(|| CliError::Input("report has no 'status' line".into()))?;
    let mut report = Report::new();
    let field = claimed.get("field");
    match (status, field) {
        ("solved", Some(_)) => {
            let x = claimed.get("x").ok_or_else(|| CliError::Input("report has no 'x' line".into()))?;
            let ok = match problem.field.as_ref() {
                Some(FieldSpec::Rational) => {
                    let xs: Result<Vec<_>, _> = x.split_whitespace().map(num_rational::BigRational::from_str).collect();
                    xs.is_ok_and(|xs| field_verify(&Rationals, problem, &xs))
                }
                Some(FieldSpec::Prime(p)) => {
                    let f = PrimeField::new(p).map_err(|e| CliError::Input(e.to_string()))?;
                    parse_vector(x).is_ok_and(|xs| field_verify(&f, problem, &xs))
                }
                None => return Err(CliError::Input("report is a field report but the problem has no field".into())),
            };
            report.push("verify", if ok { "pass" } else { "FAILED" });
            Ok(Output::new(report, if ok { EXIT_SOLVED } else { EXIT_INPUT }))
        }
        ("solved", None) => {
            let n = modulus(problem)?;
            let x = parse_vector(claimed.get("x").unwrap_or_default()).map_err(CliError::Input)?;
            let (ok, line) = verification_line(problem, n, &x);
            report.push("verify", if ok { "pass" } else { "FAILED" });
            report.push("checked", line);
            Ok(Output::new(report, if ok { EXIT_SOLVED } else { EXIT_INPUT }))
        }
        ("no-solution", _) => {
            let rerun = if field.is_some() {
                cmd_field(problem, None)?
            } else {
                let direct = SolveOptions {
                    direct: true,
                    ..opts.clone()
                };
                cmd_solve(problem, &direct)?
            };
            let confirmed = rerun.code == EXIT_NO_SOLUTION;
            report.push("verify", if confirmed { "pass (nonexistence confirmed)" } else { "FAILED (a solution exists)" });
            Ok(Output::new(report, if confirmed { EXIT_NO_SOLUTION } else { EXIT_INPUT }))
        }
        (other, _) => Err(CliError::Input(format!("report status '{other}' cannot be verified"))),
    }
}

/// Reads a problem file, mapping failures to diagnostics.
pub fn load_problem(path: &str) -> Result<ProblemFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })?;
    ProblemFile::parse(&text).map_err(|source| CliError::Parse {
        path: path.to_string(),
        source,
    })
}
