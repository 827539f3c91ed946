use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use humancomp::adversary::exhaust::exhaust_seeds;
use humancomp::adversary::frequency::frequency_distinguisher;
use humancomp::adversary::guess_solve::{guess_and_solve, project_cost};
use humancomp::adversary::security_q::{
    estimate_security_q, ChallengeSource, Guesser, Lexicon, MapConstraintGuesser, Responder,
};
use humancomp::modifiers::{Pipeline, SchemaStage};
use humancomp::owf::{brute_force_invert, eval, make_instance, OwfInstance};
use humancomp::prg::{expected_length_report, parse_digits, prg1, prg2, render_digits, Generator, PrgOutput, Seed};
use humancomp::schemas::{FixedSuffix, RunOptions, SchemaId};
use humancomp::stats::trial_rng;
use humancomp::{gen_key, Accounting, Alphabet, Error, KeyMap};

use crate::{exit_code, AttackKind, Cli, Command, Format, OwfAction, PrgArgs, QsecArgs, RunArgs};

struct Out {
    format: Format,
}

impl Out {
    fn emit(&self, record: Value, human: impl FnOnce() -> String) {
        match self.format {
            Format::Json => println!("{record}"),
            Format::Human => println!("{}", human()),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_key(path: &Path) -> Result<KeyMap> {
    KeyMap::from_file_string(&read(path)?).with_context(|| format!("key file {}", path.display()))
}

fn digit_key(path: Option<&Path>, seed: u64) -> Result<KeyMap> {
    let key = match path {
        Some(p) => load_key(p)?,
        None => KeyMap::random(Alphabet::Digits, &mut trial_rng(seed, 1)),
    };
    if key.alphabet() != Alphabet::Digits {
        bail!(Error::Config(format!("expected a digit key, got {}", key.alphabet())));
    }
    Ok(key)
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<u8> {
    let out = Out { format: cli.format };
    match &cli.command {
        Command::Keygen { domain, out: path } => keygen(&out, cli.seed, domain, path.as_deref()),
        Command::Run(args) => run(&out, args),
        Command::Prg(args) => prg(&out, cli.seed, args),
        Command::Owf { action } => owf(&out, cli, action),
        Command::Attack { kind } => attack(&out, cli, kind),
    }
}

fn keygen(out: &Out, seed: u64, domain: &str, path: Option<&Path>) -> Result<u8> {
    let alphabet = Alphabet::from_id(domain)?;
    let g = gen_key(alphabet, &mut trial_rng(seed, 0));
    if let Some(p) = path {
        fs::write(p, g.key.to_file_string()).with_context(|| format!("writing {}", p.display()))?;
    }
    let tosses = alphabet.size() as u64;
    let record = json!({
        "alphabet": alphabet.id(),
        "key": g.key.to_key_string(),
        "die_tosses": tosses,
        "die_entropy": g.prep.die_entropy,
        "chunks_written": g.prep.chunks_written,
        "prep_total": g.prep.prep_total(),
        "prep_count": tosses + g.prep.chunks_written,
    });
    out.emit(record, || {
        format!(
            "alphabet {}\nkey {}\ndie tosses {tosses} ({:.2} bits)\nchunks written {}\nPREP {:.2} (count {})",
            alphabet.id(),
            g.key.to_key_string(),
            g.prep.die_entropy,
            g.prep.chunks_written,
            g.prep.prep_total(),
            tosses + g.prep.chunks_written
        )
    });
    Ok(0)
}

fn challenges(args: &crate::ChallengeArgs) -> Result<Vec<String>> {
    let mut all = args.challenges.clone();
    if let Some(p) = &args.challenges_file {
        all.extend(read(p)?.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from));
    }
    if all.is_empty() {
        bail!("no challenges given");
    }
    Ok(all)
}

fn schema_stage(name: &str, fixed: &str) -> Result<SchemaStage> {
    Ok(match name.parse::<SchemaId>()? {
        SchemaId::LetterSubstitution => SchemaStage::LetterSubstitution,
        SchemaId::SingleDigit => SchemaStage::SingleDigit(FixedSuffix::new(fixed)?),
        SchemaId::Stml => SchemaStage::Stml,
    })
}

fn run(out: &Out, args: &RunArgs) -> Result<u8> {
    let key = load_key(&args.key)?;
    let mut pipeline: Pipeline = match &args.pipeline {
        Some(p) => p.parse()?,
        None => Pipeline::default(),
    };
    if pipeline.schema.is_none() {
        match &args.schema {
            Some(s) => pipeline.schema = Some(schema_stage(s, &args.fixed)?),
            None if args.pipeline.is_none() => bail!("give --schema or --pipeline"),
            None => {}
        }
    }
    let opts = RunOptions {
        accounting: if args.every_step { Accounting::EveryStep } else { Accounting::Formula },
        trace: args.trace,
        normalize: args.normalize,
        ..RunOptions::default()
    };
    let mut code = 0;
    for challenge in challenges(&args.input)? {
        match pipeline.run(&challenge, &key, &opts) {
            Ok(result) => {
                let ledger = result.schema.as_ref().map(|s| s.ledger.clone()).unwrap_or_default();
                let trace: Vec<String> = result.schema.iter().flat_map(|s| s.trace.iter().map(|t| t.to_line())).collect();
                let mut record = json!({
                    "challenge": challenge,
                    "schema_input": result.challenge,
                    "password": result.password,
                    "ledger": ledger.to_json(),
                });
                if args.trace {
                    record["trace"] = json!(trace);
                }
                out.emit(record, || {
                    let mut line = format!("{challenge}\t{}\tproc={}", result.password, ledger.proc_total());
                    if result.challenge != challenge {
                        line.push_str(&format!("\tinput={}", result.challenge));
                    }
                    for t in &trace {
                        line.push_str("\n  ");
                        line.push_str(t);
                    }
                    line
                });
            }
            Err(e) => {
                let err = anyhow::Error::new(e.clone());
                if code == 0 {
                    code = exit_code(&err);
                }
                eprintln!("error: {challenge}: {e}");
                out.emit(json!({ "challenge": challenge, "error": e.to_string() }), || format!("{challenge}\terror: {e}"));
            }
        }
    }
    Ok(code)
}

fn prg_record(generator: &str, seed: &Seed, o: &PrgOutput) -> Value {
    json!({
        "generator": generator,
        "seed": render_digits(seed.digits()),
        "output": o.rendered(),
        "pass_boundaries": o.pass_boundaries,
        "passes": o.passes.iter().map(|p| json!({
            "skip": p.skip,
            "input": render_digits(&p.input),
            "carry": p.carry,
            "sums": render_digits(&p.sums),
            "output": render_digits(&p.output),
            "final_sum": p.final_sum,
        })).collect::<Vec<_>>(),
    })
}

fn prg(out: &Out, seed: u64, args: &PrgArgs) -> Result<u8> {
    let generator: Generator = args.generator.parse()?;
    if let Some(n) = args.length_stats {
        let s = expected_length_report(generator, n, args.trials, seed)?;
        out.emit(serde_json::to_value(&s)?, || {
            format!(
                "{:?} n={} trials={}: mean {:.3} (variance {:.3}), nominal {:.3}, relative error {:+.3}",
                s.generator, s.n, s.trials, s.mean, s.variance, s.nominal, s.relative_error
            )
        });
        return Ok(0);
    }
    let key = digit_key(args.key.as_deref(), seed)?;
    let text = args.challenge.as_deref().context("give --challenge or --length-stats")?;
    let digits = parse_digits(text)?;
    let s = if args.any_digits { Seed::unrestricted(digits)? } else { Seed::new(digits)? };
    let o = match generator {
        Generator::Prg1 => prg1(&s, &key)?,
        Generator::Prg2 => prg2(&s, &key)?,
        Generator::SinglePass => {
            let digits = Generator::SinglePass.generate(&s, &key)?;
            let record = json!({ "generator": "stml", "seed": text, "output": render_digits(&digits) });
            out.emit(record, || render_digits(&digits));
            return Ok(0);
        }
    };
    out.emit(prg_record(&args.generator, &s, &o), || {
        let mut lines: Vec<String> = o
            .passes
            .iter()
            .map(|p| {
                format!(
                    "skip {}\tinput {}\tcarry {}\tsums {}\toutput {}",
                    p.skip,
                    render_digits(&p.input),
                    p.carry,
                    render_digits(&p.sums),
                    render_digits(&p.output)
                )
            })
            .collect();
        lines.push(o.rendered());
        lines.join("\n")
    });
    Ok(0)
}

fn owf(out: &Out, cli: &Cli, action: &OwfAction) -> Result<u8> {
    match action {
        OwfAction::Make { n, factor, out: path } => {
            let inst = make_instance(*n, *factor, &mut trial_rng(cli.seed, 0))?;
            let text = inst.to_json();
            if path.is_some() {
                write_or_print(path.as_deref(), &format!("{text}\n"))?;
                out.emit(json!({ "n": n, "length": inst.challenge.len() }), || {
                    format!("N={n} challenge length {}", inst.challenge.len())
                });
            } else {
                println!("{}", serde_json::to_string(&inst)?);
            }
        }
        OwfAction::Eval { instance, key } => {
            let inst = OwfInstance::from_json(&read(instance)?)?;
            let y = eval(&inst, &load_key(key)?)?;
            out.emit(json!({ "challenge": inst.challenge_text(), "output": render_digits(&y) }), || render_digits(&y));
        }
        OwfAction::Invert { instance, output, range } => {
            let inst = OwfInstance::from_json(&read(instance)?)?;
            let y = parse_digits(output)?;
            let rep = brute_force_invert(&inst, &y, *range, cli.budget)?;
            out.emit(serde_json::to_value(&rep)?, || {
                let mut s = format!("{} preimages, {} keys tried, {} steps", rep.preimages.len(), rep.keys_tried, rep.steps);
                for k in &rep.preimages {
                    s.push_str(&format!("\n{k}"));
                }
                s
            });
        }
    }
    Ok(0)
}

fn attack(out: &Out, cli: &Cli, kind: &AttackKind) -> Result<u8> {
    match kind {
        AttackKind::GuessSolve { n, key, target, project } => {
            if let Some(len) = project {
                let p = project_cost(Generator::Prg1, *len)?;
                out.emit(serde_json::to_value(&p)?, || {
                    format!("n={} slots={} masks={:.3e} total={:.3e} bound={:.0e} within={}", p.n, p.slots, p.masks, p.total, p.bound, p.within_bound)
                });
                return Ok(0);
            }
            let key = digit_key(key.as_deref(), cli.seed)?;
            let (y, truth) = match target {
                Some(t) => (parse_digits(t)?, None),
                None => {
                    let s = Seed::random(*n, &mut trial_rng(cli.seed, 2));
                    (Generator::Prg1.generate(&s, &key)?, Some(render_digits(s.digits())))
                }
            };
            let rep = guess_and_solve(&y, *n, &key, Generator::Prg1, cli.budget)?;
            let recovered = truth.as_ref().map(|t| rep.candidates.contains(t));
            let mut record = serde_json::to_value(&rep)?;
            record["target"] = json!(render_digits(&y));
            record["key"] = json!(key.to_key_string());
            record["true_seed"] = json!(truth);
            record["recovered"] = json!(recovered);
            out.emit(record, || {
                let mut s = format!(
                    "target {} n={} slots={} masks solved {} consistent {} candidates {}",
                    render_digits(&y),
                    rep.n,
                    rep.slots,
                    rep.masks_solved,
                    rep.masks_consistent,
                    rep.candidates.len()
                );
                if let (Some(t), Some(r)) = (&truth, recovered) {
                    s.push_str(&format!("\ntrue seed {t} recovered {r}"));
                }
                s
            });
        }
        AttackKind::Exhaust { n, key, candidate, generator } => {
            let generator: Generator = generator.parse()?;
            let key = digit_key(key.as_deref(), cli.seed)?;
            let y = match candidate {
                Some(c) => parse_digits(c)?,
                None => generator.generate(&Seed::random(*n, &mut trial_rng(cli.seed, 2)), &key)?,
            };
            let rep = exhaust_seeds(&y, &key, *n, generator, cli.budget)?;
            let mut record = serde_json::to_value(&rep)?;
            record["candidate"] = json!(render_digits(&y));
            out.emit(record, || format!("{:?} after {} seeds{}", rep.verdict, rep.seeds_tried, rep.seed.as_ref().map(|s| format!(" (seed {s})")).unwrap_or_default()));
        }
        AttackKind::Qsec(args) => qsec(out, cli, args)?,
        AttackKind::Frequency { samples_file, generator, n, count } => {
            let samples: Vec<Vec<u8>> = match samples_file {
                Some(p) => read(p)?.lines().map(str::trim).filter(|l| !l.is_empty()).map(parse_digits).collect::<Result<_, _>>()?,
                None => {
                    let generator: Generator = generator.parse()?;
                    let key = KeyMap::random(Alphabet::Digits, &mut trial_rng(cli.seed, 1));
                    (0..*count as u64)
                        .map(|t| generator.generate(&Seed::random(*n, &mut trial_rng(cli.seed, 100 + t)), &key))
                        .collect::<Result<_, _>>()?
                }
            };
            let rep = frequency_distinguisher(&samples, cli.budget)?;
            out.emit(serde_json::to_value(&rep)?, || {
                format!(
                    "{} (digits chi2 {:.2} p={:.4}; bigrams {})",
                    if rep.reject { "reject uniform" } else { "consistent with uniform" },
                    rep.digits.statistic,
                    rep.digits.p_value,
                    rep.bigrams.as_ref().map_or("n/a".into(), |b| format!("chi2 {:.2} p={:.4}", b.statistic, b.p_value))
                )
            });
        }
        AttackKind::Learn { observations, predict } => {
            let pairs = observations
                .iter()
                .map(|o| o.split_once('=').with_context(|| format!("observation `{o}` is not CHALLENGE=PASSWORD")))
                .collect::<Result<Vec<_>>>()?;
            let g = MapConstraintGuesser::learn(pairs)?;
            let learned: Vec<String> = g
                .partial_map()
                .iter()
                .enumerate()
                .filter_map(|(i, d)| d.map(|d| format!("{}{d}", Alphabet::LATIN.render_symbol(i))))
                .collect();
            let prediction = predict.as_ref().map(|c| g.predict(c));
            out.emit(json!({ "learned": learned, "prediction": prediction }), || {
                let mut s = format!("learned {}", learned.join(" "));
                if let Some(p) = &prediction {
                    s.push_str(&format!("\nprediction {}", p.as_deref().unwrap_or("(abstain)")));
                }
                s
            });
        }
    }
    Ok(0)
}

fn qsec(out: &Out, cli: &Cli, args: &QsecArgs) -> Result<()> {
    let responder = match args.reused {
        Some(k) => Responder::Reused((0..k).map(|i| format!("reused-password-{i}")).collect()),
        None => Responder::Schema {
            id: args.schema.parse()?,
            key: match &args.key {
                Some(p) => load_key(p)?,
                None => KeyMap::random(Alphabet::LATIN, &mut trial_rng(cli.seed, 1)),
            },
            suffix: Some(FixedSuffix::new(&args.fixed)?),
        },
    };
    let source = match &args.lexicon {
        Some(p) => ChallengeSource::Lexicon(Lexicon::parse(&read(p)?)?),
        None => ChallengeSource::UniformLetters(args.letters),
    };
    let guesser: Guesser = args.guesser.parse()?;
    let rep = estimate_security_q(&responder, &source, guesser, args.max_observations, args.trials, cli.seed)?;
    out.emit(serde_json::to_value(&rep)?, || {
        let mut s = format!("{} on {} with {:?} guesser", rep.schema, rep.distribution, rep.guesser);
        for p in &rep.points {
            s.push_str(&format!(
                "\nm={}\t{:.4}\t[{:.4}, {:.4}]",
                p.observations, p.rate, p.wilson_low, p.wilson_high
            ));
        }
        let show = |q: Option<usize>| q.map_or("> max".to_string(), |q| q.to_string());
        s.push_str(&format!("\nQ = {} (99% lower bound: {})", show(rep.q), show(rep.q_confident)));
        s
    });
    Ok(())
}
