//! Runs every code block in the book as a doctest, so the guide and the
//! library cannot drift apart. Each chapter becomes the documentation of a
//! hidden module; `cargo test --doc` does the rest.

macro_rules! book_chapter {
    ($name:ident, $path:literal) => {
        #[doc = include_str!($path)]
        pub mod $name {}
    };
}

book_chapter!(introduction, "../../../book/src/introduction.md");
book_chapter!(registers, "../../../book/src/registers.md");
book_chapter!(grover, "../../../book/src/grover.md");
book_chapter!(td_learning, "../../../book/src/td-learning.md");
book_chapter!(agent, "../../../book/src/agent.md");
book_chapter!(gridworld, "../../../book/src/gridworld.md");
book_chapter!(experiments, "../../../book/src/experiments.md");
