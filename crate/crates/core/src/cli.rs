//! Command-line frontend: expression parser, subcommand dispatch, output
//! formatting.
//!
//! Exit codes: 0 on success (all checks pass), 1 when a verification suite
//! reports a failure, 2 on usage or parse errors.

use crate::algebra::{AlphabetClass, Element, Generator, Kind, Lattice, TensorElement};
use crate::relations::{build_group_rules, build_oscillator_rules, RewriteSystem};
use crate::rewrite::normal_order;
use crate::scalar::{LaurentScalar, Rational};
use crate::verify::{self, Residual, SuiteName, SuiteReport, VerifyError};
use clap::{Parser, Subcommand, ValueEnum};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CliError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("generator `{name}` expects {expected} indices, got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("index {index} out of range for lattice of size {n}")]
    IndexOutOfRange { index: i64, n: u32 },
    #[error("generator `{name}` does not belong to the {algebra} algebra")]
    WrongAlphabet { name: String, algebra: String },
    #[error("{0}")]
    Usage(String),
}

impl From<VerifyError> for CliError {
    fn from(err: VerifyError) -> Self {
        CliError::Usage(err.to_string())
    }
}

// ---------------------------------------------------------------------------
// Expression grammar
//
//   expr     := ["-"] term (("+"|"-") term)*
//   term     := factor ("*" factor)*
//   factor   := scalar | genapp | "(" expr ")"
//   genapp   := name "(" int ("," int)* ")"
//   name     := "a"|"ad"|"al"|"als"|"b"|"bs"|"f"|"fs"
//   scalar   := rational | "q" ["^" ["-"] int]
//   rational := ["-"] int ["/" int]
//
// The leading unary minus is accepted so that the canonical rendering of
// elements with a negative head term parses back.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl fmt::Display for Token {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(out, "`{s}`"),
            Token::Int(n) => write!(out, "`{n}`"),
            Token::Plus => write!(out, "`+`"),
            Token::Minus => write!(out, "`-`"),
            Token::Star => write!(out, "`*`"),
            Token::Slash => write!(out, "`/`"),
            Token::Caret => write!(out, "`^`"),
            Token::LParen => write!(out, "`(`"),
            Token::RParen => write!(out, "`)`"),
            Token::Comma => write!(out, "`,`"),
            Token::End => write!(out, "end of input"),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(Token, usize)>, CliError> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                tokens.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                tokens.push((Token::Star, i));
                i += 1;
            }
            '/' => {
                tokens.push((Token::Slash, i));
                i += 1;
            }
            '^' => {
                tokens.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                tokens.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                tokens.push((Token::RParen, i));
                i += 1;
            }
            ',' => {
                tokens.push((Token::Comma, i));
                i += 1;
            }
            'a'..='z' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_lowercase() {
                    i += 1;
                }
                tokens.push((Token::Ident(input[start..i].to_string()), start));
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let value = input[start..i].parse::<i64>().map_err(|_| CliError::Syntax {
                    column: start + 1,
                    message: "integer literal out of range".into(),
                })?;
                tokens.push((Token::Int(value), start));
            }
            other => {
                return Err(CliError::Syntax {
                    column: i + 1,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    tokens.push((Token::End, bytes.len()));
    Ok(tokens)
}

/// Sum of signed products of atoms.
#[derive(Debug, Clone)]
enum Ast {
    Rational(Rational),
    QPow(i64),
    Gen { name: String, args: Vec<i64> },
    Mul(Vec<Ast>),
    Sum(Vec<(bool, Ast)>),
}

struct ExprParser {
    tokens: Vec<(Token, usize)>,
    at: usize,
}

impl ExprParser {
    fn peek(&self) -> &Token {
        &self.tokens[self.at].0
    }

    fn pos(&self) -> usize {
        self.tokens[self.at].1
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].0.clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> CliError {
        CliError::Syntax {
            column: self.pos() + 1,
            message: message.into(),
        }
    }

    fn expect(&mut self, token: Token) -> Result<(), CliError> {
        if *self.peek() == token {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected {token}, found {}", self.peek())))
        }
    }

    fn parse_expr(&mut self) -> Result<Ast, CliError> {
        let mut terms = Vec::new();
        let negative = if *self.peek() == Token::Minus {
            self.bump();
            true
        } else {
            false
        };
        terms.push((negative, self.parse_term()?));
        loop {
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    terms.push((false, self.parse_term()?));
                }
                Token::Minus => {
                    self.bump();
                    terms.push((true, self.parse_term()?));
                }
                _ => break,
            }
        }
        Ok(Ast::Sum(terms))
    }

    fn parse_term(&mut self) -> Result<Ast, CliError> {
        let mut factors = vec![self.parse_factor()?];
        while *self.peek() == Token::Star {
            self.bump();
            factors.push(self.parse_factor()?);
        }
        Ok(Ast::Mul(factors))
    }

    fn parse_factor(&mut self) -> Result<Ast, CliError> {
        match self.peek().clone() {
            Token::LParen => {
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Token::Minus => {
                self.bump();
                match self.peek().clone() {
                    Token::Int(_) => {
                        let rational = self.parse_rational()?;
                        match rational {
                            Ast::Rational(r) => Ok(Ast::Rational(-&r)),
                            _ => unreachable!(),
                        }
                    }
                    other => Err(self.err(format!("expected integer after `-`, found {other}"))),
                }
            }
            Token::Int(_) => self.parse_rational(),
            Token::Ident(name) if name == "q" => {
                self.bump();
                if *self.peek() == Token::Caret {
                    self.bump();
                    let negative = if *self.peek() == Token::Minus {
                        self.bump();
                        true
                    } else {
                        false
                    };
                    match self.bump() {
                        Token::Int(k) => Ok(Ast::QPow(if negative { -k } else { k })),
                        other => {
                            self.at -= 1;
                            Err(self.err(format!("expected integer exponent, found {other}")))
                        }
                    }
                } else {
                    Ok(Ast::QPow(1))
                }
            }
            Token::Ident(name) => {
                self.bump();
                self.expect(Token::LParen)?;
                let mut args = Vec::new();
                loop {
                    match self.bump() {
                        Token::Int(v) => args.push(v),
                        other => {
                            self.at -= 1;
                            return Err(self.err(format!("expected index, found {other}")));
                        }
                    }
                    match self.peek() {
                        Token::Comma => {
                            self.bump();
                        }
                        Token::RParen => {
                            self.bump();
                            break;
                        }
                        other => {
                            return Err(
                                self.err(format!("expected `,` or `)`, found {other}"))
                            )
                        }
                    }
                }
                Ok(Ast::Gen { name, args })
            }
            other => Err(self.err(format!("expected a factor, found {other}"))),
        }
    }

    fn parse_rational(&mut self) -> Result<Ast, CliError> {
        let numer = match self.bump() {
            Token::Int(v) => v,
            _ => unreachable!("caller checked for an integer"),
        };
        if *self.peek() == Token::Slash {
            self.bump();
            match self.bump() {
                Token::Int(denom) if denom != 0 => {
                    Ok(Ast::Rational(Rational::new(numer, denom)))
                }
                Token::Int(_) => {
                    self.at -= 1;
                    Err(self.err("zero denominator"))
                }
                other => {
                    self.at -= 1;
                    Err(self.err(format!("expected denominator, found {other}")))
                }
            }
        } else {
            Ok(Ast::Rational(Rational::integer(numer)))
        }
    }
}

fn parse_ast(input: &str) -> Result<Ast, CliError> {
    let tokens = lex(input)?;
    let mut parser = ExprParser { tokens, at: 0 };
    let ast = parser.parse_expr()?;
    if *parser.peek() != Token::End {
        return Err(parser.err(format!("unexpected {}", parser.peek())));
    }
    Ok(ast)
}

fn lower_generator(
    name: &str,
    args: &[i64],
    lattice: Lattice,
    class: AlphabetClass,
) -> Result<Generator, CliError> {
    let kind = Kind::from_name(name).ok_or_else(|| CliError::Usage(format!(
        "unknown generator `{name}` (expected one of a, ad, al, als, b, bs, f, fs)"
    )))?;
    if kind.class() != class {
        return Err(CliError::WrongAlphabet {
            name: name.to_string(),
            algebra: class.to_string(),
        });
    }
    if args.len() != kind.arity() {
        return Err(CliError::Arity {
            name: name.to_string(),
            expected: kind.arity(),
            got: args.len(),
        });
    }
    let mut indices = Vec::with_capacity(args.len());
    for &arg in args {
        if arg < 1 || arg > lattice.size() as i64 {
            return Err(CliError::IndexOutOfRange {
                index: arg,
                n: lattice.size(),
            });
        }
        indices.push(arg as u32);
    }
    Generator::new(kind, &indices).map_err(|e| CliError::Usage(e.to_string()))
}

fn lower(ast: &Ast, lattice: Lattice, class: AlphabetClass) -> Result<Element, CliError> {
    match ast {
        Ast::Rational(r) => Ok(Element::scalar(LaurentScalar::from_rational(r.clone()))),
        Ast::QPow(k) => Ok(Element::scalar(LaurentScalar::q_pow(*k))),
        Ast::Gen { name, args } => {
            let gen = lower_generator(name, args, lattice, class)?;
            Ok(Element::from_generator(gen))
        }
        Ast::Mul(factors) => {
            let mut acc = Element::one();
            for factor in factors {
                let rhs = lower(factor, lattice, class)?;
                acc = acc
                    .checked_mul(&rhs)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
            }
            Ok(acc)
        }
        Ast::Sum(terms) => {
            let mut acc = Element::zero();
            for (negative, term) in terms {
                let e = lower(term, lattice, class)?;
                acc = if *negative { &acc - &e } else { &acc + &e };
            }
            Ok(acc)
        }
    }
}

/// Parse an expression over the given alphabet into a free-algebra element.
pub fn parse_expression(
    input: &str,
    lattice: Lattice,
    class: AlphabetClass,
) -> Result<Element, CliError> {
    lower(&parse_ast(input)?, lattice, class)
}

/// Parse a single generator application such as `al(1,2)`.
pub fn parse_generator(
    input: &str,
    lattice: Lattice,
    class: AlphabetClass,
) -> Result<Generator, CliError> {
    match parse_ast(input)? {
        Ast::Sum(terms) => match terms.as_slice() {
            [(false, Ast::Mul(factors))] => match factors.as_slice() {
                [Ast::Gen { name, args }] => lower_generator(name, args, lattice, class),
                _ => Err(CliError::Usage(
                    "expected a single generator application, e.g. al(1,2)".into(),
                )),
            },
            _ => Err(CliError::Usage(
                "expected a single generator application, e.g. al(1,2)".into(),
            )),
        },
        _ => unreachable!("parser always returns a sum"),
    }
}

// ---------------------------------------------------------------------------
// Command dispatch
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgebraArg {
    /// Oscillator algebra over `a`, `ad`.
    Osc,
    /// Transformation algebra over `al`, `als`, `b`, `bs`, `f`, `fs`.
    Group,
}

impl AlgebraArg {
    fn class(&self) -> AlphabetClass {
        match self {
            AlgebraArg::Osc => AlphabetClass::Oscillator,
            AlgebraArg::Group => AlphabetClass::Group,
        }
    }

    fn system(&self, n: u32) -> RewriteSystem {
        match self {
            AlgebraArg::Osc => build_oscillator_rules(n),
            AlgebraArg::Group => build_group_rules(n),
        }
    }
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    let parse_int = |txt: &str| txt.parse::<i64>().map_err(|_| format!("bad rational `{s}`"));
    let value = match s.split_once('/') {
        Some((n, d)) => {
            let denom = parse_int(d)?;
            if denom == 0 {
                return Err("zero denominator".into());
            }
            Rational::new(parse_int(n)?, denom)
        }
        None => Rational::integer(parse_int(s)?),
    };
    if value.is_zero() {
        return Err("q must be nonzero".into());
    }
    Ok(value)
}

#[derive(Debug, Parser)]
#[command(
    name = "qboson",
    version,
    about = "Exact symbolic checks for a deformed boson algebra and its inhomogeneous invariance quantum group on a finite momentum lattice"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Specialize the deformation symbol to a nonzero rational after all
    /// symbolic reduction.
    #[arg(long, global = true, value_parser = parse_rational_arg)]
    pub q: Option<Rational>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce an expression to its normal form.
    Normalize {
        /// Number of lattice points.
        #[arg(long)]
        lattice: u32,
        /// Which algebra's rules to reduce with.
        #[arg(long, value_enum)]
        algebra: AlgebraArg,
        /// Expression, e.g. "a(1)*ad(1) - q*ad(1)*a(1) - 1".
        #[arg(long)]
        expr: String,
    },
    /// Run verification suites and report pass/fail per check.
    Verify {
        /// Number of lattice points.
        #[arg(long, default_value_t = 2)]
        lattice: u32,
        /// Suite name: compatibility, invariance, homomorphism,
        /// coassociativity, counit, star_closure, classical_limit, glpq,
        /// antipode_n1.
        #[arg(long, conflicts_with = "all")]
        suite: Option<String>,
        /// Run every suite for all lattice sizes up to --lattice.
        #[arg(long)]
        all: bool,
    },
    /// Print the coproduct of a group generator.
    Coproduct {
        /// Number of lattice points.
        #[arg(long)]
        lattice: u32,
        /// Generator application, e.g. "al(1,2)".
        #[arg(long)]
        gen: String,
    },
    /// Emit the full oriented rule catalogue for audit.
    DumpRules {
        /// Number of lattice points.
        #[arg(long)]
        lattice: u32,
        /// Which algebra's rules to dump.
        #[arg(long, value_enum)]
        algebra: AlgebraArg,
    },
}

/// Successful command output plus whether verification failed.
pub struct Output {
    pub text: String,
    pub verification_failed: bool,
}

fn specialize_element(e: &Element, q: &Rational) -> Element {
    e.map_coeffs(|c| {
        LaurentScalar::from_rational(c.eval_at(q).expect("nonzero q validated at parse"))
    })
}

fn specialize_tensor(t: &TensorElement, q: &Rational) -> TensorElement {
    t.map_coeffs(|c| {
        LaurentScalar::from_rational(c.eval_at(q).expect("nonzero q validated at parse"))
    })
}

fn specialize_reports(reports: &mut [SuiteReport], q: &Rational) {
    for report in reports {
        for check in &mut report.checks {
            if let Some(residual) = &mut check.residual {
                match residual {
                    Residual::Element(e) => *e = specialize_element(e, q),
                    Residual::Tensor(t) => *t = specialize_tensor(t, q),
                    Residual::Note(_) => {}
                }
            }
        }
    }
}

fn render_reports(reports: &[SuiteReport], format: Format) -> Output {
    let all_pass = reports.iter().all(SuiteReport::passed);
    let text = match format {
        Format::Json => {
            if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0].to_json()).unwrap()
            } else {
                serde_json::to_string_pretty(&verify::reports_to_json(reports)).unwrap()
            }
        }
        Format::Text => {
            let mut out = String::new();
            for report in reports {
                out.push_str(&report.to_text());
            }
            let total: usize = reports.iter().map(|r| r.checks.len()).sum();
            out.push_str(&format!(
                "overall: {} ({} checks across {} suite runs)",
                if all_pass { "pass" } else { "FAIL" },
                total,
                reports.len()
            ));
            out
        }
    };
    Output {
        text,
        verification_failed: !all_pass,
    }
}

/// Execute a parsed command line.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Normalize {
            lattice,
            algebra,
            expr,
        } => {
            if *lattice == 0 {
                return Err(CliError::Usage("lattice size must be at least 1".into()));
            }
            let lat = Lattice::new(*lattice);
            let element = parse_expression(expr, lat, algebra.class())?;
            let sys = algebra.system(*lattice);
            let mut reduced = normal_order(&element, &sys);
            if let Some(q) = &cli.q {
                reduced = specialize_element(&reduced, q);
            }
            let text = match cli.format {
                Format::Text => reduced.to_string(),
                Format::Json => serde_json::to_string_pretty(&reduced.to_json()).unwrap(),
            };
            Ok(Output {
                text,
                verification_failed: false,
            })
        }
        Command::Verify { lattice, suite, all } => {
            let mut reports = if *all {
                verify::run_all(*lattice)?
            } else {
                match suite {
                    Some(name) => {
                        let suite = SuiteName::parse(name)?;
                        vec![verify::run_suite(suite, *lattice)?]
                    }
                    None => {
                        return Err(CliError::Usage(
                            "pass --suite <name> or --all".into(),
                        ))
                    }
                }
            };
            if let Some(q) = &cli.q {
                specialize_reports(&mut reports, q);
            }
            Ok(render_reports(&reports, cli.format))
        }
        Command::Coproduct { lattice, gen } => {
            if *lattice == 0 {
                return Err(CliError::Usage("lattice size must be at least 1".into()));
            }
            let lat = Lattice::new(*lattice);
            let generator = parse_generator(gen, lat, AlphabetClass::Group)?;
            let mut t = crate::hopf::coproduct(lat, &generator)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            if let Some(q) = &cli.q {
                t = specialize_tensor(&t, q);
            }
            let text = match cli.format {
                Format::Text => t.to_string(),
                Format::Json => serde_json::to_string_pretty(&t.to_json()).unwrap(),
            };
            Ok(Output {
                text,
                verification_failed: false,
            })
        }
        Command::DumpRules { lattice, algebra } => {
            if *lattice == 0 {
                return Err(CliError::Usage("lattice size must be at least 1".into()));
            }
            let sys = algebra.system(*lattice);
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&sys.to_json()).unwrap(),
                Format::Text => {
                    let mut out = String::new();
                    for ((l, r), info) in sys.rules() {
                        out.push_str(&format!(
                            "{}*{} -> {}  [{}{}]\n",
                            l,
                            r,
                            info.replacement,
                            info.family.tag(),
                            if info.conjugate { ", conjugate" } else { "" }
                        ));
                    }
                    out.push_str(&format!("{} rules", sys.num_rules()));
                    out
                }
            };
            Ok(Output {
                text,
                verification_failed: false,
            })
        }
    }
}

/// Entry point used by the binary: parse argv, run, map to an exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(output) => {
            println!("{}", output.text);
            if output.verification_failed {
                1
            } else {
                0
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}
