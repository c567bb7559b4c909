//! Acceptance suite. Runs without the libtest harness and prints one line
//! per criterion; exits non-zero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use common::*;
use idiomeval::lexicon_io::{default_lemma_table, parse_lexicon};
use idiomeval_core::aligner::{align_pair, align_pair_reverse, symmetrize, train_model1, AlignmentSet, Direction, Heuristic};
use idiomeval_core::apt::{apt_corpus, chrf_span, unigram_precision};
use idiomeval_core::corpus::{build_split, AnnotatedPair, IdiomSpan, Role, SplitKind};
use idiomeval_core::lexicon::BilingualLexicon;
use idiomeval_core::litter::litter_corpus;
use idiomeval_core::matcher::{analyze, compile_pattern};
use idiomeval_core::metrics::{CHRF_BETA, CHRF_MAX_N};
use idiomeval_core::text::{normalize, tokenize};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("worked LitTER examples", worked_examples),
        ("self-translation scores zero", self_translation),
        ("macro/micro separation", macro_micro),
        ("matcher demo", matcher_demo),
        ("aligner sanity", aligner_sanity),
        ("chrF/uniprec oracles", metric_oracles),
        ("empty-alignment diagnostics", empty_alignments),
        ("split protocol", split_protocol),
        ("eval determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}; {ms} ms)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({why}; {ms} ms)", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn worked_examples() -> Outcome {
    let start = Instant::now();
    let pairs = worked_pairs();
    let (lexicon, _) = parse_lexicon(&worked_dictionary());
    let hyps: BTreeMap<String, String> =
        pairs.iter().zip(&WORKED).map(|(p, e)| (p.pair_id.clone(), e.hypothesis.to_string())).collect();
    let report = litter_corpus(&pairs, &hyps, &lexicon).map_err(|e| e.to_string())?;
    for (s, e) in report.sentences.iter().zip(&WORKED) {
        let got: BTreeSet<&str> = s.triggering_words.iter().map(|t| t.hypothesis_word.as_str()).collect();
        let want: BTreeSet<&str> = e.triggers.unwrap_or(&[]).iter().copied().collect();
        ensure!(s.triggered == e.triggers.is_some(), "{}: verdict {}", e.idiom, s.triggered);
        ensure!(got == want, "{}: triggers {got:?}", e.idiom);
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok("5/5 verdicts and trigger sets".into())
}

fn self_translation() -> Outcome {
    let mut rng = StdRng::seed_from_u64(11);
    let word = |rng: &mut StdRng, prefix: &str| -> String {
        let len = rng.gen_range(1..=3);
        let body: String = (0..len).map(|_| *b"aeiou".choose(rng).unwrap() as char).collect();
        format!("{prefix}{body}")
    };
    let mut pairs = Vec::new();
    let mut lexicon = BilingualLexicon::new();
    for k in 0..1000 {
        let src: Vec<String> = (0..rng.gen_range(1..12)).map(|_| word(&mut rng, "s")).collect();
        let tgt: Vec<String> = (0..rng.gen_range(1..12)).map(|_| word(&mut rng, "t")).collect();
        for _ in 0..rng.gen_range(0..6) {
            let s = src.choose(&mut rng).unwrap().clone();
            let t = if rng.gen_bool(0.5) { tgt.choose(&mut rng).unwrap().clone() } else { word(&mut rng, "t") };
            lexicon.insert(&s, &t);
        }
        let plain = AnnotatedPair::regular(k.to_string(), src.join(" "), tgt.join(" "));
        let start = rng.gen_range(0..src.len());
        let end = rng.gen_range(start + 1..=src.len());
        let span = IdiomSpan::over_tokens(&format!("idiom{}", k % 37), &plain.source_tokens, start, end);
        pairs.push(AnnotatedPair::new(plain.pair_id, plain.source_raw, plain.target_raw, vec![span]).unwrap());
    }
    let hyps: BTreeMap<String, String> = pairs.iter().map(|p| (p.pair_id.clone(), p.target_raw.clone())).collect();
    let r = litter_corpus(&pairs, &hyps, &lexicon).map_err(|e| e.to_string())?;
    ensure!(r.evaluated == 1000, "evaluated {}", r.evaluated);
    ensure!(r.macro_litter == 0.0 && r.micro_litter == 0.0, "macro {} micro {}", r.macro_litter, r.micro_litter);
    Ok(format!("1000 pairs, {} lexicon entries, LitTER 0", lexicon.pair_count()))
}

fn macro_micro() -> Outcome {
    let mut lexicon = BilingualLexicon::new();
    lexicon.insert("kick", "frapper");
    lexicon.insert("spill", "renverser");
    let mut pairs = Vec::new();
    let mut hyps = BTreeMap::new();
    for k in 0..9 {
        let id = format!("a{k}");
        pairs.push(annotated(&id, "they kick the bucket", "ils meurent", "kick the bucket"));
        hyps.insert(id, "ils frapper le seau".to_string());
    }
    pairs.push(annotated("b0", "they spill the beans", "ils avouent", "spill the beans"));
    hyps.insert("b0".into(), "ils avouent".into());
    let r = litter_corpus(&pairs, &hyps, &lexicon).map_err(|e| e.to_string())?;
    ensure!(r.micro_litter == 0.9, "micro {}", r.micro_litter);
    ensure!(r.macro_litter == 0.5, "macro {}", r.macro_litter);
    Ok("micro 0.9, macro 0.5".into())
}

fn matcher_demo() -> Outcome {
    let table = default_lemma_table();
    let pattern = compile_pattern("pull the wool over someone's eyes", &table).map_err(|e| e.to_string())?;
    let cases = [
        (
            "He tried pulling the wool over John's eyes by hiding the profits in separate accounts, but he was quick to catch onto his scheme.",
            Some("pulling the wool over John's eyes"),
        ),
        (
            "He tried pulling the wool over James' eyes by hiding the profits in separate accounts, but he was quick to catch onto his scheme.",
            Some("pulling the wool over James' eyes"),
        ),
        (
            "He tried pulling the wool over our eyes by hiding the profits in separate accounts, but we were quick to catch onto his scheme.",
            Some("pulling the wool over our eyes"),
        ),
        ("Don't try to pull the wool over her eyes. She's too smart.", Some("pull the wool over her eyes")),
        ("She pulled a woolly hat over her eyes and went to sleep.", None),
        ("He tried to pull wool from the sheep.", None),
    ];
    for (sentence, want) in cases {
        let tokens = tokenize(sentence);
        let spans = pattern.find_matches(&analyze(&tokens, &table), &tokens);
        let chars: Vec<char> = sentence.chars().collect();
        let got: Vec<String> = spans.iter().map(|s| chars[s.char_start..s.char_end].iter().collect()).collect();
        let want: Vec<String> = want.into_iter().map(String::from).collect();
        ensure!(got == want, "`{sentence}` matched {got:?}");
    }
    Ok("4 variants matched, 2 controls rejected".into())
}

fn aligner_sanity() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(5);
    let vocab = 60;
    let mut image: Vec<usize> = (0..vocab).collect();
    image.shuffle(&mut rng);
    let mut bitext = Vec::new();
    let mut gold = Vec::new();
    for _ in 0..200 {
        let len = rng.gen_range(4..=10);
        let src: Vec<usize> = rand::seq::index::sample(&mut rng, vocab, len).into_vec();
        let mut tgt = Vec::new();
        let mut links = BTreeSet::new();
        for (i, &w) in src.iter().enumerate() {
            if rng.gen_bool(0.1) {
                tgt.push(format!("noise{}", rng.gen_range(0..vocab)));
            } else {
                tgt.push(format!("t{}", image[w]));
                links.insert((i, i));
            }
        }
        bitext.push((src.iter().map(|w| format!("s{w}")).collect::<Vec<_>>(), tgt));
        gold.push(links);
    }
    let fwd = train_model1(&bitext, 5, 0.01).map_err(|e| e.to_string())?;
    let reversed: Vec<_> = bitext.iter().map(|(s, t)| (t.clone(), s.clone())).collect();
    let rev = train_model1(&reversed, 5, 0.01).map_err(|e| e.to_string())?;
    for table in [&fwd, &rev] {
        for w in table.log_likelihoods.windows(2) {
            ensure!(w[1] >= w[0] - 1e-6, "log-likelihood fell from {} to {}", w[0], w[1]);
        }
    }
    let (mut found, mut total) = (0usize, 0usize);
    for (k, ((s, t), links)) in bitext.iter().zip(&gold).enumerate() {
        let id = k.to_string();
        let f = align_pair(&fwd, &id, s, t);
        let r = align_pair_reverse(&rev, &id, s, t);
        let sym = symmetrize(&f, &r, Heuristic::Intersection).map_err(|e| e.to_string())?;
        total += links.len();
        found += links.intersection(&sym.links).count();
    }
    let recall = found as f64 / total as f64;
    ensure!(recall >= 0.95, "recall {recall:.4}");
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!("recall {:.2}% of {total} gold links", 100.0 * recall))
}

fn greedy_matches<T: PartialEq>(hyp: &[Vec<T>], reference: &[Vec<T>]) -> usize {
    let mut used = vec![false; reference.len()];
    let mut matches = 0;
    for h in hyp {
        if let Some(k) = (0..reference.len()).find(|&k| !used[k] && reference[k] == *h) {
            used[k] = true;
            matches += 1;
        }
    }
    matches
}

fn grams(items: &[char], n: usize) -> Vec<Vec<char>> {
    if items.len() < n {
        return Vec::new();
    }
    (0..=items.len() - n).map(|i| items[i..i + n].to_vec()).collect()
}

fn chrf_oracle(reference: &str, hyp: &str) -> f64 {
    let r: Vec<char> = reference.chars().filter(|c| !c.is_whitespace()).collect();
    let h: Vec<char> = hyp.chars().filter(|c| !c.is_whitespace()).collect();
    let b2 = CHRF_BETA * CHRF_BETA;
    let mut scores = Vec::new();
    for n in 1..=CHRF_MAX_N {
        let rg = grams(&r, n);
        if rg.is_empty() {
            continue;
        }
        let hg = grams(&h, n);
        let m = greedy_matches(&hg, &rg) as f64;
        let p = if hg.is_empty() { 0.0 } else { m / hg.len() as f64 };
        let rc = m / rg.len() as f64;
        scores.push(if p + rc == 0.0 { 0.0 } else { (1.0 + b2) * p * rc / (b2 * p + rc) });
    }
    if scores.is_empty() {
        0.0
    } else {
        scores.iter().sum::<f64>() / scores.len() as f64
    }
}

fn uniprec_oracle(reference: &[String], hyp: &[String]) -> f64 {
    let r: BTreeSet<&String> = reference.iter().collect();
    let h: BTreeSet<&String> = hyp.iter().collect();
    r.iter().filter(|w| h.contains(*w)).count() as f64 / r.len() as f64
}

fn metric_oracles() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let alphabet: Vec<char> = "abcdeé ".chars().collect();
    let text = |rng: &mut StdRng| -> String {
        let len = rng.gen_range(1..=24);
        (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
    };
    let mut checked = (0, 0);
    for _ in 0..500 {
        let (r, h) = (text(&mut rng), text(&mut rng));
        if r.trim().is_empty() || h.trim().is_empty() {
            continue;
        }
        let c = chrf_span(&r, &h, CHRF_MAX_N, CHRF_BETA).map_err(|e| e.to_string())?;
        ensure!((c - chrf_oracle(&r, &h)).abs() < 1e-12, "chrF `{r}` vs `{h}`: {c}");
        checked.0 += 1;
        let rw: Vec<String> = r.split_whitespace().map(normalize).collect();
        let hw: Vec<String> = h.split_whitespace().map(normalize).collect();
        let u = unigram_precision(&rw, &hw).map_err(|e| e.to_string())?;
        ensure!((u - uniprec_oracle(&rw, &hw)).abs() < 1e-12, "uniprec `{r}` vs `{h}`: {u}");
        checked.1 += 1;
    }
    ensure!(checked.0 >= 450, "only {} pairs checked", checked.0);
    Ok(format!("{} chrF and {} uniprec pairs within 1e-12", checked.0, checked.1))
}

fn empty_alignments() -> Outcome {
    let mut pairs = Vec::new();
    let mut refs = BTreeMap::new();
    let mut hyps = BTreeMap::new();
    let mut texts = BTreeMap::new();
    for k in 0..45 {
        let id = format!("e{k}");
        let p = annotated(&id, "they kick the bucket today", "ils meurent aujourd'hui", "kick the bucket");
        let full: &[(usize, usize)] = &[(0, 0), (1, 1), (4, 2)];
        let ref_links: &[(usize, usize)] = if k == 17 { &[(0, 0), (4, 2)] } else { full };
        let set = |len, links: &[(usize, usize)]| {
            AlignmentSet::new(id.clone(), p.source_tokens.len(), len, Direction::Symmetrized).with_links(links.iter().copied())
        };
        refs.insert(id.clone(), set(p.target_tokens.len(), ref_links).map_err(|e| e.to_string())?);
        let hyp = "ils meurent aujourd'hui";
        hyps.insert(id.clone(), set(tokenize(hyp).len(), full).map_err(|e| e.to_string())?);
        texts.insert(id, hyp.to_string());
        pairs.push(p);
    }
    let r = apt_corpus(&pairs, &refs, &hyps, &texts).map_err(|e| e.to_string())?;
    ensure!(r.items == 45, "{} items", r.items);
    ensure!(r.empty_ref_rate == 1.0 / 45.0, "reference empty rate {}", r.empty_ref_rate);
    ensure!(r.empty_hyp_rate == 0.0, "hypothesis empty rate {}", r.empty_hyp_rate);
    ensure!(r.scores.iter().filter(|s| s.uniprec.is_none()).count() == 1, "unscored spans");
    Ok(format!("empty rate {:.1}%", 100.0 * r.empty_ref_rate))
}

fn split_protocol() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let template = AnnotatedPair::regular("t", "he kicked the bucket", "il est mort");
    let mut pairs = Vec::with_capacity(10_000);
    let mut idiom_of = BTreeMap::new();
    for k in 0..10_000 {
        let id = format!("p{k}");
        if rng.gen_bool(0.3) {
            pairs.push(AnnotatedPair::regular(id, "a b", "c d"));
            continue;
        }
        // Skewed so that many idioms are rare and a few are frequent.
        let idiom = format!("idiom-{}", (rng.gen_range(0.0f64..1.0).powi(3) * 3000.0) as usize);
        let span = IdiomSpan::over_tokens(&idiom, &template.source_tokens, 1, 4);
        let pair = AnnotatedPair::new(id.clone(), &template.source_raw, &template.target_raw, vec![span])
            .map_err(|e| e.to_string())?;
        idiom_of.insert(id, idiom);
        pairs.push(pair);
    }
    let mut totals: BTreeMap<&str, usize> = BTreeMap::new();
    for idiom in idiom_of.values() {
        *totals.entry(idiom).or_default() += 1;
    }
    let joint = build_split(&pairs, SplitKind::Joint, 1, 42).map_err(|e| e.to_string())?;
    let count = |ids: &[String]| {
        let mut c: BTreeMap<&str, usize> = BTreeMap::new();
        for id in ids {
            *c.entry(idiom_of[id].as_str()).or_default() += 1;
        }
        c
    };
    let (train, test, gone) = (count(&joint.idiom_train_ids), count(&joint.idiom_test_ids), count(&joint.discarded_ids));
    let mut singletons = 0;
    for (&idiom, &n) in &totals {
        let get = |m: &BTreeMap<&str, usize>| m.get(idiom).copied().unwrap_or(0);
        if n == 1 {
            singletons += 1;
            ensure!(get(&train) + get(&test) == 0 && get(&gone) == 1, "singleton {idiom} listed");
        } else {
            ensure!(get(&train) == n / 2 && get(&test) == n.div_ceil(2), "{idiom}: n={n}");
        }
    }

    let regular: Vec<&str> = joint.regular_ids.iter().map(String::as_str).collect();
    let train_ids: Vec<&str> = joint.idiom_train_ids.iter().map(String::as_str).collect();
    for (kind, factor, repeat) in [(SplitKind::Zero, 1, 0), (SplitKind::Joint, 1, 1), (SplitKind::Upsample, 20, 20)] {
        let m = build_split(&pairs, kind, factor, 42).map_err(|e| e.to_string())?;
        ensure!(m.idiom_train_ids == joint.idiom_train_ids, "{kind:?} train partition differs");
        ensure!(m.test_listing() == joint.test_listing(), "{kind:?} test listing differs");
        let mut want = regular.clone();
        for _ in 0..repeat {
            want.extend(&train_ids);
        }
        ensure!(m.training_listing() == want, "{kind:?} training listing");
        for e in m.entries() {
            let expected = match e.role {
                Role::Regular => 1,
                Role::IdiomTrain => repeat,
                Role::IdiomTest => 0,
            };
            ensure!(e.repeat == expected, "{kind:?} entry {} repeat {}", e.pair_id, e.repeat);
        }
    }
    Ok(format!("{} idioms, {singletons} singletons discarded", totals.len()))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (corpus, lexicon, hyps) = worked_files(dir.path());
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let out = run(&[
            "eval", "--corpus", s(&corpus), "--hypotheses", s(&hyps), "--lexicon", s(&lexicon), "--train-aligner",
        ]);
        ensure!(code(&out) == 0, "eval failed: {}", String::from_utf8_lossy(&out.stderr));
        outputs.push(out.stdout);
    }
    ensure!(outputs[0] == outputs[1], "reports differ");
    Ok(format!("{} identical bytes", outputs[0].len()))
}
