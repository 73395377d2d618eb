//! Parse/print round trip over a corpus of spec files: parsing the printed
//! form gives back an equal SpecFile, and the printed form is a fixed
//! point of parse-then-print.

use gradedlnd::specfile::{parse_spec, render_spec};

const CORPUS: &[&str] = &[
    // plain rings
    "ring\n  var x 1\nend\n",
    "ring\n  var x 1\n  var y 1\nend\n",
    "ring\n  var x 2\n  var y 3\n  var z 5\nend\n",
    "ring\n  inverted u 1\nend\n",
    "ring\n  inverted u -2\n  var y 3\nend\n",
    "ring\n  var a -1\n  var b -2\n  inverted c 4\nend\n",
    // comments and loose whitespace collapse to the same content
    "# header comment\nring\n    var x 1   # trailing\n\n  var y 2\nend\n",
    // relations
    "ring\n  var X 2\n  var Y 2\n  var Z 2\n  relation Y^2 - X*Z leading Y\nend\n",
    "ring\n  var X 15\n  var Y 10\n  var Z 6\n  relation X^2 + Y^3 + Z^5 leading X\nend\n",
    "ring\n  inverted u 2\n  var T 1\n  relation T^2 - u leading T\nend\n",
    "ring\n  inverted u 2\n  var T 1\n  var S 3\n  relation T^2 - u leading T\n  relation S^2 - u^3 leading S\nend\n",
    "ring\n  var x 1\n  var y 1\n  relation 2*y^2 - x^2 leading y\nend\n",
    // asserted flags
    "ring\n  var x 1\n  assert domain\nend\n",
    "ring\n  var X 1\n  var Y 1\n  var Z 1\n  relation X*Y + Z^2 leading Z\n  assert domain\n  assert normal\n  assert relation-irreducible\n  assert generators-prime\n  assert generators-non-associate\nend\n",
    // derivations
    "ring\n  var x 1\n  var y 1\nend\n\nderivation\n  x -> y\nend\n",
    "ring\n  var x 1\n  var y 1\nend\n\nderivation D\n  y -> x^2\n  x -> 0\nend\n",
    "ring\n  var x 1\n  var y 1\nend\n\nderivation A\n  x -> y\nend\n\nderivation B\n  y -> x\nend\n",
    "ring\n  var x 1\n  var y 2\nend\n\nderivation\n  y -> 1/2*x^2\nend\n",
    "ring\n  inverted u 1\n  var y 1\nend\n\nderivation\n  y -> 3*u^-2\nend\n",
    // veronese derivations
    "ring\n  var x 1\n  var y 1\nend\n\nveronese-derivation\n  d 2\n  y^2 -> 2*x*y\n  x*y -> x^2\nend\n",
    "ring\n  inverted x 1\n  var y 2\nend\n\nveronese-derivation V\n  d 2\n  y -> x^2\nend\n",
    "ring\n  inverted x 1\nend\n\nveronese-derivation\n  d 2\n  x^2 -> x^2\n  x^-2 -> -x^-2\nend\n",
    // witnesses and kernel seeds
    "ring\n  var x 1\n  var y 1\nend\n\nwitness\n  f x\n  t y over 1\nend\n",
    "ring\n  var x 1\n  var y 1\nend\n\nwitness W\n  f x^2\n  t x*y over 1\n  r y^2 over 1\nend\n",
    "ring\n  var x 1\n  var y 1\nend\n\nkernel-seeds\n  x\n  x^2 - x\nend\n",
    // everything at once
    "ring\n  var X 2\n  var Y 2\n  var Z 2\n  relation Y^2 - X*Z leading Y\n  assert domain\nend\n\nderivation D\n  Y -> X\n  Z -> 2*Y\nend\n\nwitness\n  f X\n  t Y over 1\nend\n\nkernel-seeds\n  X\nend\n",
];

#[test]
fn corpus_is_large_enough() {
    assert!(CORPUS.len() >= 20, "corpus has only {} files", CORPUS.len());
}

#[test]
fn parse_print_round_trip() {
    for (i, text) in CORPUS.iter().enumerate() {
        let once = parse_spec(text).unwrap_or_else(|e| panic!("corpus[{i}] failed to parse: {e}"));
        let printed = render_spec(&once);
        let twice = parse_spec(&printed)
            .unwrap_or_else(|e| panic!("corpus[{i}] canonical form failed to parse: {e}\n{printed}"));
        assert!(once == twice, "corpus[{i}] changed under round trip:\n{printed}");
        assert_eq!(
            printed,
            render_spec(&twice),
            "corpus[{i}] canonical form is not a fixed point"
        );
    }
}

#[test]
fn canonical_form_is_stable_under_reformatting() {
    let messy = "# c\nring\n\tvar x 1\n  var   y 2\nend\n";
    // tabs are not part of the grammar's indentation handling for columns,
    // but parsing is whitespace-insensitive within a line
    let clean = "ring\n  var x 1\n  var y 2\nend\n";
    let a = parse_spec(messy).unwrap();
    let b = parse_spec(clean).unwrap();
    assert!(a == b);
    assert_eq!(render_spec(&a), render_spec(&b));
}
