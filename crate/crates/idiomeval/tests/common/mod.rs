//! Fixtures shared by the CLI and acceptance targets.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use idiomeval_core::corpus::{AnnotatedPair, IdiomSpan};
use idiomeval_core::text::tokenize;

pub fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_idiomeval"));
    cmd.env_remove("IDIOMEVAL_CONFIG");
    cmd
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Pair with one span over the first occurrence of `phrase` in `source`.
pub fn annotated(id: &str, source: &str, target: &str, phrase: &str) -> AnnotatedPair {
    let plain = AnnotatedPair::regular(id, source, target);
    let want: Vec<String> = tokenize(phrase).into_iter().map(|t| t.normalized).collect();
    let toks = &plain.source_tokens;
    let start = (0..toks.len())
        .find(|&i| {
            toks.len() - i >= want.len() && toks[i..i + want.len()].iter().zip(&want).all(|(t, w)| &t.normalized == w)
        })
        .unwrap_or_else(|| panic!("`{phrase}` not in `{source}`"));
    let span = IdiomSpan::over_tokens(phrase, toks, start, start + want.len());
    AnnotatedPair::new(id, source, target, vec![span]).unwrap()
}

pub struct WorkedExample {
    pub source: &'static str,
    pub reference: &'static str,
    pub hypothesis: &'static str,
    pub idiom: &'static str,
    pub blocklists: &'static [(&'static str, &'static [&'static str])],
    pub triggers: Option<&'static [&'static str]>,
}

/// The five worked LitTER examples: two caught errors, one correct literal
/// translation and two missed errors.
pub const WORKED: [WorkedExample; 5] = [
    WorkedExample {
        source: "To postpone this vote one more time would be to bark up the wrong tree.",
        reference: "Postposer ce vote une fois de plus eut été se tromper de cible.",
        hypothesis: "Reporter ce vote une fois de plus, c'est se tromper d'arbre.",
        idiom: "bark up the wrong tree",
        blocklists: &[
            ("bark", &["aboyer", "ecorces", "ecorce"]),
            ("up", &["debout"]),
            ("the", &["le", "la", "les"]),
            ("wrong", &["faux", "tort", "erroné", "mal"]),
            ("tree", &["arbre", "arbres", "sapin", "arborescence"]),
        ],
        triggers: Some(&["arbre"]),
    },
    WorkedExample {
        source: "For companies, using technology to gather important data, its like bread and butter.",
        reference: "Pour les sociétés, utiliser la technologie pour recueillir des données, c'est la routine.",
        hypothesis: "Pour les entreprises, utiliser la technologie pour collecter des données importantes, c'est comme du pain et du beurre.",
        idiom: "bread and butter",
        blocklists: &[("bread", &["pain"]), ("and", &["et"]), ("butter", &["et", "pain", "beurre"])],
        triggers: Some(&["et", "pain", "beurre"]),
    },
    WorkedExample {
        source: "And here is some eye candy for you, from a range of DIY scientists and artists from all over the globe.",
        reference: "Et voici quelques bonbons pour vos yeux, de la part d'un éventail de scientifiques et des artistes bricoleurs de tous les coins de la planète.",
        hypothesis: "Et voici quelques bonbons pour les yeux, d'une gamme de scientifiques et d'artistes du bricolage du monde entier.",
        idiom: "eye candy",
        blocklists: &[("eye", &["oculaire", "oeil", "yeux", "œil"]), ("candy", &["bonbon", "bonbons", "sucrerie"])],
        triggers: None,
    },
    WorkedExample {
        source: "As the example of Cyprus shows, Ankara does not pull its punches.",
        reference: "Comme le montre l'exemple de Chypre, Ankara n'y va pas avec le dos de la cuiller.",
        hypothesis: "Comme le montre l'exemple de Chypre, Ankara ne tire pas les ficelles.",
        idiom: "pull its punches",
        blocklists: &[("pull", &["tirez", "tirer"]), ("its", &["ses", "son", "sa"]), ("punches", &["coups"])],
        triggers: None,
    },
    WorkedExample {
        source: "[..] it was already being put on ice on the grounds that 'We'll never get it though the G20'.",
        reference: "[..] elle était mise au rencart au motif que \"nous n'arriverons jamais à convaincre le G20\".",
        hypothesis: "[..] on l'a déjà gelé au motif que \"nous n'y arriverons jamais par le biais du G20\".",
        idiom: "put on ice",
        blocklists: &[("put", &["mis", "mettre"]), ("on", &["sur"]), ("ice", &["glace", "ice", "verglas"])],
        triggers: None,
    },
];

pub fn worked_pairs() -> Vec<AnnotatedPair> {
    WORKED
        .iter()
        .enumerate()
        .map(|(k, e)| annotated(&format!("c{}", k + 1), e.source, e.reference, e.idiom))
        .collect()
}

/// MUSE-layout dictionary holding exactly the seeded blocklists.
pub fn worked_dictionary() -> String {
    let mut out = String::new();
    for e in &WORKED {
        for (src, tgts) in e.blocklists {
            for t in *tgts {
                out.push_str(&format!("{src} {t}\n"));
            }
        }
    }
    out
}

pub fn worked_hypotheses() -> String {
    WORKED.iter().map(|e| format!("{}\n", e.hypothesis)).collect()
}

/// Corpus, dictionary and hypothesis files for the worked examples.
pub fn worked_files(dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let corpus = write(dir, "worked.jsonl", &idiomeval::corpus_io::render_corpus(&worked_pairs()));
    let lexicon = write(dir, "dict.txt", &worked_dictionary());
    let hyps = write(dir, "hyps.txt", &worked_hypotheses());
    (corpus, lexicon, hyps)
}
