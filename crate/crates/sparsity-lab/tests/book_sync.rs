//! The guide's code snippets must exist verbatim as doc-tests in the
//! library, so `cargo test --doc` keeps the book honest. This test walks
//! every ```rust block in book/src and requires it to appear, line for
//! line, inside the doc comments of the mapped source files.

use std::fs;
use std::path::Path;

fn rust_blocks(markdown: &str) -> Vec<Vec<String>> {
    let mut blocks = Vec::new();
    let mut current: Option<Vec<String>> = None;
    for line in markdown.lines() {
        match (&mut current, line.trim_end()) {
            (None, "```rust") => current = Some(Vec::new()),
            (Some(block), "```") => {
                blocks.push(std::mem::take(block));
                current = None;
            }
            (Some(block), other) => block.push(other.to_string()),
            _ => {}
        }
    }
    blocks
}

fn doc_comment_lines(source: &str) -> Vec<String> {
    source
        .lines()
        .filter_map(|l| {
            let t = l.trim_start();
            t.strip_prefix("//! ")
                .or_else(|| t.strip_prefix("/// "))
                .or_else(|| (t == "//!" || t == "///").then_some(""))
                .map(|s| s.trim_end().to_string())
        })
        .collect()
}

fn contains_block(doc: &[String], block: &[String]) -> bool {
    if block.is_empty() {
        return true;
    }
    doc.windows(block.len())
        .any(|w| w.iter().map(String::as_str).eq(block.iter().map(String::as_str)))
}

#[test]
fn book_snippets_are_doc_tests() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let book = root.join("../../book/src");
    let src = root.join("src");
    // chapter -> source files whose doc comments may carry its snippets
    let chapters: &[(&str, &[&str])] = &[
        ("introduction.md", &["lib.rs"]),
        ("sparse-forms.md", &["forms.rs"]),
        ("sieve-sets.md", &["sieve.rs"]),
        ("character-sums.md", &["charsum.rs"]),
        ("square-sieve.md", &["charsum.rs"]),
        ("approximation.md", &["approx.rs"]),
        ("tower-counterexample.md", &["example21.rs", "interval.rs"]),
        ("cli.md", &[]),
        ("verification.md", &[]),
    ];
    let mut checked = 0;
    for (chapter, sources) in chapters {
        let text = fs::read_to_string(book.join(chapter))
            .unwrap_or_else(|e| panic!("missing chapter {}: {}", chapter, e));
        let blocks = rust_blocks(&text);
        if sources.is_empty() {
            assert!(blocks.is_empty(), "{} has rust blocks but no mapped module", chapter);
            continue;
        }
        let docs: Vec<Vec<String>> = sources
            .iter()
            .map(|f| doc_comment_lines(&fs::read_to_string(src.join(f)).unwrap()))
            .collect();
        for (i, block) in blocks.iter().enumerate() {
            assert!(
                docs.iter().any(|d| contains_block(d, block)),
                "snippet {} of {} is not a doc-test in {:?}; first line: {:?}",
                i + 1,
                chapter,
                sources,
                block.first()
            );
            checked += 1;
        }
    }
    assert!(checked >= 8, "expected at least 8 synced snippets, found {}", checked);
}

#[test]
fn summary_links_resolve() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let book = root.join("../../book/src");
    let summary = fs::read_to_string(book.join("SUMMARY.md")).unwrap();
    for line in summary.lines() {
        if let Some(start) = line.find("](") {
            let rest = &line[start + 2..];
            let end = rest.find(')').unwrap();
            let target = &rest[..end];
            assert!(book.join(target).exists(), "SUMMARY links to missing {}", target);
        }
    }
}
