//! Text stand-in for the voice channel.

use std::io::{BufRead, Write};

use chrono::{DateTime, Utc};
use voxfeed_core::dialog::{
    advance, Command, DialogAction, DialogInput, DialogNode, NodeKind, SemanticTag, Session, SubscribedUrls,
    TurnContext,
};
use voxfeed_core::text::split_words;
use voxfeed_core::{DialogTree, ShortcutIndex};

/// One accepted turn: what was dispatched and where it led.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub input: DialogInput,
    pub action: DialogAction,
    pub node_id: String,
    pub turn_count: u64,
}

/// What a line of text means to the navigator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Line {
    Input(DialogInput),
    Quit,
    Unknown(String),
}

pub struct Repl<'a> {
    tree: &'a DialogTree,
    index: &'a ShortcutIndex,
    session: Session,
    directory: SubscribedUrls,
    clock: Box<dyn FnMut() -> DateTime<Utc> + 'a>,
    trace: Vec<TraceStep>,
}

impl<'a> Repl<'a> {
    pub fn new(tree: &'a DialogTree, index: &'a ShortcutIndex) -> Self {
        Self::with_clock(tree, index, Utc::now)
    }

    pub fn with_clock(
        tree: &'a DialogTree,
        index: &'a ShortcutIndex,
        clock: impl FnMut() -> DateTime<Utc> + 'a,
    ) -> Self {
        Self {
            tree,
            index,
            session: Session::new("repl", tree.feed().source_url.as_str(), Vec::new()),
            directory: SubscribedUrls::default(),
            clock: Box::new(clock),
            trace: Vec::new(),
        }
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    pub fn trace(&self) -> &[TraceStep] {
        &self.trace
    }

    /// Classifies a line. `:`-lines are commands; a line whose words are
    /// exactly a grammar phrase is a phrase match; anything else is a
    /// shortcut query.
    pub fn classify(&self, line: &str) -> Line {
        let line = line.trim();
        if let Some(cmd) = line.strip_prefix(':') {
            let cmd = cmd.trim();
            if cmd == "quit" {
                return Line::Quit;
            }
            return match cmd.parse::<Command>() {
                Ok(c) => Line::Input(DialogInput::Command(c)),
                Err(_) => Line::Unknown(cmd.to_string()),
            };
        }
        let words: Vec<String> = split_words(line).into_iter().map(str::to_lowercase).collect();
        match self.tree.grammar().match_words(&words) {
            Some(rule) if !words.is_empty() => Line::Input(DialogInput::PhraseMatch(SemanticTag::new(rule.tag.item()))),
            _ => Line::Input(DialogInput::shortcut(line)),
        }
    }

    /// Applies one input and records it in the trace.
    pub fn step(&mut self, input: DialogInput) -> DialogAction {
        let ctx = TurnContext {
            now: (self.clock)(),
            directory: &self.directory,
        };
        let (next, action) = advance(&self.session, self.tree, self.index, &input, &ctx)
            .expect("the session only ever holds nodes of its own tree");
        self.session = next;
        self.trace.push(TraceStep {
            input,
            action: action.clone(),
            node_id: self.session.current_node.clone(),
            turn_count: self.session.turn_count,
        });
        action
    }

    /// Runs until `:quit` or end of input, then prints the turn count.
    pub fn run(&mut self, input: impl BufRead, mut out: impl Write) -> std::io::Result<()> {
        self.show_current(&mut out)?;
        for line in input.lines() {
            let line = line?;
            match self.classify(&line) {
                Line::Quit => break,
                Line::Unknown(cmd) => {
                    writeln!(out, "unknown command :{cmd} (try :next :previous :repeat :back :follow :home :quit)")?
                }
                Line::Input(input) => match self.step(input) {
                    DialogAction::Prompt { .. } => self.show_current(&mut out)?,
                    DialogAction::AnnounceLink { url } => writeln!(out, "link: {url}")?,
                    DialogAction::EnterFeed { url } => writeln!(out, "feed: {url}")?,
                    DialogAction::Reject { reason } => writeln!(out, "sorry, {reason}.")?,
                },
            }
            out.flush()?;
        }
        writeln!(out, "turns: {}", self.session.turn_count)?;
        out.flush()
    }

    fn current(&self) -> &DialogNode {
        self.tree
            .node(&self.session.current_node)
            .expect("the session only ever holds nodes of its own tree")
    }

    fn show_current(&self, out: &mut impl Write) -> std::io::Result<()> {
        let node = self.current();
        writeln!(out, "[{}] {}", node.id, node.prompt)?;
        if node.kind == NodeKind::ChannelMenu {
            for rule in &self.tree.grammar().rules {
                writeln!(out, "  {}: {}", rule.tag.item(), rule.text())?;
            }
        }
        Ok(())
    }
}
