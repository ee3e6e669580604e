use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use linepack_core::bgroup::GroupContext;
use linepack_core::chartab::{full_table, CharacterTable};
use linepack_core::etf::{
    frame_dimension, gram_character, gram_closed_form_matrix, gram_frame, read_matrix, sample_three_way,
    synthesize_frame, verify_frame, verify_gram, welch_bound_sq, write_frame, write_gram, EtfCertificate,
    FrameManifest, MatrixFile, SampleReport,
};
use linepack_core::exact::{fmt_rational, ratio_str, GaussianRationalMatrix, Rational};
use linepack_core::gf2n::FieldContext;
use linepack_core::heis::RepContext;
use linepack_core::scheme::{builtin_srg, srg_scheme, HyperdiffReport, SrgParameters};
use linepack_core::search::{apply_builtin_groups, enumerate_tuples, to_csv, SearchOptions};

use crate::error::{CliError, CliResult};
use crate::output::{print_json, Orderings, OutputSet, RunManifest};
use crate::{Cli, Command, GramMethod, Mode};

/// Largest n whose frame and Gram are built densely.
const DENSE_MAX_N: u32 = 5;
const CHARTAB_MAX_N: u32 = 7;

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Build { n, samples, out } => build(*n, *samples, cli.seed, &out.out),
        Command::Verify { input: Some(path), .. } => verify_file(path),
        Command::Verify { n: Some(n), mode, samples, .. } => verify_n(*n, *mode, *samples, cli.seed),
        Command::Verify { .. } => Err(CliError::Usage("verify needs --input or --n".into())),
        Command::Search { max_order, nonabelian_orders, min_k, out } => search(
            SearchOptions { max_order: *max_order, nonabelian_orders: *nonabelian_orders, min_k: *min_k },
            out.as_deref(),
        ),
        Command::Chartab { n, out } => chartab(*n, &out.out),
        Command::Gram { n, method } => gram(*n, method),
        Command::Srg { v, k, lambda, mu } => srg(SrgParameters { v: *v, k: *k, lambda: *lambda, mu: *mu }),
    }
}

fn check_n(n: u32, max: u32) -> CliResult<()> {
    if n.is_multiple_of(2) {
        return Err(CliError::Usage(format!("n must be odd, got {n}")));
    }
    if !(3..=9).contains(&n) {
        return Err(CliError::Usage(format!("n must lie in 3..=9, got {n}")));
    }
    if n > max {
        return Err(CliError::Usage(format!("n = {n} exceeds {max}, the largest size this command builds densely")));
    }
    Ok(())
}

struct Construction {
    group: GroupContext,
}

impl Construction {
    fn new(n: u32) -> CliResult<Self> {
        Ok(Construction { group: GroupContext::suzuki(FieldContext::new(n)?)? })
    }

    fn field(&self) -> &FieldContext {
        self.group.field()
    }

    fn rep(&self) -> CliResult<RepContext<'_>> {
        Ok(RepContext::new(&self.group)?)
    }

    fn table(&self, rep: &RepContext<'_>) -> CliResult<CharacterTable> {
        Ok(full_table(&self.group, rep)?)
    }
}

/// Outcome of a sampled three-way check, with the expected pattern values.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct SampledCertificate {
    n: u32,
    m: u64,
    num_vectors: u64,
    #[serde(serialize_with = "ratio_str::one")]
    expected_diagonal: Rational,
    #[serde(serialize_with = "ratio_str::one")]
    welch_squared: Rational,
    method: &'static str,
    generator: &'static str,
    #[serde(flatten)]
    report: SampleReport,
    status: &'static str,
}

impl SampledCertificate {
    fn new(field: &FieldContext, report: SampleReport) -> Self {
        let m = frame_dimension(field);
        let big_n = 1u64 << (2 * field.degree());
        let ok = report.mismatches == 0 && report.pattern_violations == 0;
        SampledCertificate {
            n: field.degree(),
            m,
            num_vectors: big_n,
            expected_diagonal: Rational::new(m as i64, big_n as i64),
            welch_squared: welch_bound_sq(m, big_n).expect("m < N").1,
            method: "sample: closed-form = character = frame",
            generator: "ChaCha8, uniform (g, h) index pairs",
            report,
            status: if ok { "NO_VIOLATION" } else { "VIOLATION" },
        }
    }

    fn check(&self) -> CliResult<()> {
        match self.report.first_violation {
            None => Ok(()),
            Some((g, h)) => Err(CliError::Violation(format!(
                "{} route mismatches and {} pattern violations among {} samples; first at ({g}, {h})",
                self.report.mismatches, self.report.pattern_violations, self.report.samples
            ))),
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct BuildParameters {
    n: u32,
    seed: Option<u64>,
    samples: Option<usize>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CertificateSummary {
    verdict: String,
    file: String,
}

fn build(n: u32, samples: usize, seed: u64, dir: &Path) -> CliResult<()> {
    check_n(n, 9)?;
    let start = Instant::now();
    let c = Construction::new(n)?;
    let rep = c.rep()?;
    let mut out = OutputSet::create(dir)?;
    let cert_name = format!("certificate_n{n}.json");
    let (params, verdict, failure) = if n <= DENSE_MAX_N {
        let frame = synthesize_frame(&rep)?;
        let mut cert = verify_frame(&frame)?;
        let gram = gram_frame(&frame)?;
        let agree = gram == gram_closed_form_matrix(&c.group)?;
        cert.method.push("closed-form".into());
        cert.agreement = Some(agree);
        out.write_with(&format!("frame_n{n}.lpm"), "LINEPACK-MATRIX v1 frame", |w| write_frame(w, &frame))?;
        out.write_with(&format!("gram_n{n}.lpm"), "LINEPACK-MATRIX v1 gram", |w| write_gram(w, &gram))?;
        out.write_json(&cert_name, &cert)?;
        let failure = if !cert.is_optimal() {
            Some(cert.violation.clone().unwrap_or_else(|| "not optimal".into()))
        } else if !agree {
            gram.first_mismatch(&gram_closed_form_matrix(&c.group)?)
                .map(|(i, j)| format!("frame Gram differs from the closed form at ({i}, {j})"))
        } else {
            None
        };
        (BuildParameters { n, seed: None, samples: None }, verdict_name(&cert), failure)
    } else {
        let cert = SampledCertificate::new(c.field(), sample_three_way(&rep, samples, seed));
        out.write_json(&cert_name, &cert)?;
        let failure = cert.check().err().map(|e| e.to_string());
        (BuildParameters { n, seed: Some(seed), samples: Some(samples) }, cert.status.to_string(), failure)
    };
    let timing = format!("timing_n{n}.json");
    let manifest = BuildManifest {
        frame: FrameManifest::new(c.field()),
        run: RunManifest {
            command: "build",
            parameters: params,
            modulus: c.field().modulus(),
            orderings: Orderings::default(),
            files: out.files().to_vec(),
            certificate: CertificateSummary { verdict: verdict.clone(), file: cert_name },
            timing: timing.clone(),
        },
    };
    out.write_json(&format!("manifest_n{n}.json"), &manifest)?;
    out.write_timing(&timing, start.elapsed())?;
    println!("n = {n}: {verdict} ({})", out.path(&format!("manifest_n{n}.json")).display());
    match failure {
        Some(why) => Err(CliError::Violation(why)),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct BuildManifest {
    #[serde(flatten)]
    run: RunManifest<BuildParameters, CertificateSummary>,
    frame: FrameManifest,
}

fn verdict_name(cert: &EtfCertificate) -> String {
    serde_json::to_value(cert.verdict).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn certificate_result(cert: &EtfCertificate) -> CliResult<()> {
    print_json(cert);
    if cert.is_optimal() && cert.agreement != Some(false) {
        Ok(())
    } else if cert.agreement == Some(false) {
        Err(CliError::Violation("Gram routes disagree".into()))
    } else {
        Err(CliError::Violation(cert.violation.clone().unwrap_or_else(|| "not an ETF".into())))
    }
}

fn verify_file(path: &Path) -> CliResult<()> {
    let file = File::open(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let parsed = read_matrix(BufReader::new(file))?;
    let cert = match parsed {
        MatrixFile::Frame(f) => verify_frame(&f)?,
        MatrixFile::Gram(g) => verify_gram(&g)?,
    };
    certificate_result(&cert)
}

fn verify_n(n: u32, mode: Mode, samples: usize, seed: u64) -> CliResult<()> {
    match mode {
        Mode::Full => {
            check_n(n, DENSE_MAX_N)?;
            let c = Construction::new(n)?;
            let rep = c.rep()?;
            let frame = synthesize_frame(&rep)?;
            let mut cert = verify_frame(&frame)?;
            let table = c.table(&rep)?;
            let grams = [
                gram_frame(&frame)?,
                gram_closed_form_matrix(&c.group)?,
                gram_character(&c.group, &table, &table.d_set)?,
            ];
            cert.method.extend(["closed-form".to_string(), "character".to_string()]);
            cert.agreement = Some(grams[0] == grams[1] && grams[1] == grams[2]);
            certificate_result(&cert)
        }
        Mode::Sample => {
            check_n(n, 9)?;
            let c = Construction::new(n)?;
            let rep = c.rep()?;
            let cert = SampledCertificate::new(c.field(), sample_three_way(&rep, samples, seed));
            print_json(&cert);
            cert.check()
        }
    }
}

fn search(opts: SearchOptions, out: Option<&Path>) -> CliResult<()> {
    if opts.max_order < 2 {
        return Err(CliError::Usage(format!("--max-order must be at least 2, got {}", opts.max_order)));
    }
    if opts.min_k < 1 {
        return Err(CliError::Usage("--min-k must be at least 1".into()));
    }
    let mut tuples = enumerate_tuples(&opts);
    apply_builtin_groups(&mut tuples)?;
    let csv = to_csv(&tuples);
    match out {
        Some(p) => std::fs::write(p, &csv)?,
        None => std::io::stdout().lock().write_all(csv.as_bytes())?,
    }
    eprintln!(
        "{} tuples (max order {}, min k {}, nonabelian orders only: {})",
        tuples.len(),
        opts.max_order,
        opts.min_k,
        opts.nonabelian_orders
    );
    Ok(())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ChartabReport<'a> {
    n: u32,
    modulus: u32,
    characters: usize,
    classes: usize,
    degree_counts: BTreeMap<u64, usize>,
    orthogonality: Orthogonality,
    /// Distinct values of `|Σ_{χ∈D} χ(g)|^2` off the identity.
    flat_sums: Vec<String>,
    /// Distinct values of `|Σ_{χ∈D} d_χ χ(g)|^2` off the identity.
    weighted_flat_sums: Vec<String>,
    table: &'a CharacterTable,
}

#[derive(Serialize)]
struct Orthogonality {
    ok: bool,
    error: Option<String>,
}

fn distinct(values: &[Rational]) -> Vec<String> {
    let mut v: Vec<Rational> = values.to_vec();
    v.sort();
    v.dedup();
    v.iter().map(fmt_rational).collect()
}

fn chartab(n: u32, dir: &Path) -> CliResult<()> {
    check_n(n, CHARTAB_MAX_N)?;
    let c = Construction::new(n)?;
    let rep = c.rep()?;
    let table = c.table(&rep)?;
    let orth = table.verify_orthogonality();
    let mut degree_counts = BTreeMap::new();
    for d in table.degrees() {
        *degree_counts.entry(d).or_insert(0) += 1;
    }
    let report = ChartabReport {
        n,
        modulus: c.field().modulus(),
        characters: table.characters.len(),
        classes: table.classes.len(),
        degree_counts,
        orthogonality: Orthogonality { ok: orth.is_ok(), error: orth.as_ref().err().map(|e| e.to_string()) },
        flat_sums: distinct(&table.flat_sums()[1..]),
        weighted_flat_sums: distinct(&table.weighted_flat_sums()[1..]),
        table: &table,
    };
    let mut out = OutputSet::create(dir)?;
    let name = format!("chartab_n{n}.json");
    out.write_json(&name, &report)?;
    let degrees: Vec<String> = report.degree_counts.iter().map(|(d, k)| format!("{k} of degree {d}")).collect();
    println!(
        "{} characters ({}); orthogonality {}; flat sums {}",
        report.characters,
        degrees.join(", "),
        if report.orthogonality.ok { "OK" } else { "FAILED" },
        report.flat_sums.join(",")
    );
    println!("{}", out.path(&name).display());
    orth.map_err(|e| CliError::Violation(e.to_string()))
}

fn gram(n: u32, methods: &[GramMethod]) -> CliResult<()> {
    check_n(n, DENSE_MAX_N)?;
    let mut methods = methods.to_vec();
    methods.dedup();
    if methods.is_empty() {
        return Err(CliError::Usage("no --method given".into()));
    }
    let c = Construction::new(n)?;
    let rep = c.rep()?;
    let matrices: Vec<(GramMethod, GaussianRationalMatrix)> = methods
        .iter()
        .map(|&m| {
            let g = match m {
                GramMethod::ClosedForm => gram_closed_form_matrix(&c.group)?,
                GramMethod::Character => {
                    let table = c.table(&rep)?;
                    gram_character(&c.group, &table, &table.d_set)?
                }
                GramMethod::Frame => gram_frame(&synthesize_frame(&rep)?)?,
            };
            Ok((m, g))
        })
        .collect::<CliResult<_>>()?;
    let (first, reference) = &matrices[0];
    let entries = reference.rows() * reference.cols();
    for (m, g) in &matrices[1..] {
        if let Some((i, j)) = reference.first_mismatch(g) {
            println!("DISAGREE {} vs {} at ({i}, {j})", first.name(), m.name());
            return Err(CliError::Violation(format!(
                "{} and {} Gram entries differ at ({i}, {j})",
                first.name(),
                m.name()
            )));
        }
    }
    if matrices.len() > 1 {
        println!("AGREE ({entries} entries)");
    } else {
        println!("{}: {entries} entries", first.name());
    }
    Ok(())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SrgOutput {
    params: SrgParameters,
    lambda_plus: i64,
    lambda_minus: i64,
    criterion: Option<&'static str>,
    report: HyperdiffReport,
    certificate: Option<EtfCertificate>,
}

fn srg(params: SrgParameters) -> CliResult<()> {
    let adjacency = builtin_srg(params)?;
    let s = srg_scheme(params, &adjacency)?;
    let (criterion, certificate) = match s.nontrivial {
        Some(j) => {
            let gram = s.scheme.gram_projector(&[j])?;
            let label = if j == 1 { "2k - v = 2 lambda_minus" } else { "2k - v = 2 lambda_plus" };
            (Some(label), Some(verify_gram(&gram)?))
        }
        None => (None, None),
    };
    let out = SrgOutput {
        params,
        lambda_plus: s.lambda_plus,
        lambda_minus: s.lambda_minus,
        criterion,
        report: s.report,
        certificate,
    };
    print_json(&out);
    match &out.certificate {
        Some(cert) if !cert.is_optimal() => {
            Err(CliError::Violation(cert.violation.clone().unwrap_or_else(|| "not an ETF".into())))
        }
        _ => Ok(()),
    }
}
