//! Finite weak games: ranks never increase along edges, so every infinite
//! play eventually stays in one rank and is won by the player matching its
//! parity (even for player 1).

use std::collections::HashMap;
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    P1,
    P2,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::P1 => Player::P2,
            Player::P2 => Player::P1,
        }
    }

    /// The player who wins infinite plays stabilising at this rank.
    pub fn of_rank(rank: u32) -> Player {
        if rank.is_multiple_of(2) {
            Player::P1
        } else {
            Player::P2
        }
    }
}

pub type Pos = usize;

#[derive(Debug, Clone, Default)]
pub struct WeakGame {
    pub owner: Vec<Player>,
    pub succ: Vec<Vec<Pos>>,
    pub rank: Vec<u32>,
    pub labels: Vec<String>,
}

impl WeakGame {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_position(&mut self, owner: Player, rank: u32, label: impl Into<String>) -> Pos {
        self.owner.push(owner);
        self.rank.push(rank);
        self.succ.push(Vec::new());
        self.labels.push(label.into());
        self.owner.len() - 1
    }

    pub fn add_edge(&mut self, from: Pos, to: Pos) {
        if !self.succ[from].contains(&to) {
            self.succ[from].push(to);
        }
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    /// Edges along which the rank increases.
    pub fn rank_violations(&self) -> Vec<(Pos, Pos)> {
        let mut out = Vec::new();
        for (p, succs) in self.succ.iter().enumerate() {
            for &q in succs {
                if self.rank[q] > self.rank[p] {
                    out.push((p, q));
                }
            }
        }
        out
    }

    fn predecessors(&self) -> Vec<Vec<Pos>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (p, succs) in self.succ.iter().enumerate() {
            for &q in succs {
                pred[q].push(p);
            }
        }
        pred
    }

    pub fn to_dot(&self, highlight: &[Pos]) -> String {
        let mut out = String::from("digraph game {\n");
        for p in 0..self.len() {
            // Player 1 positions are boxes, player 2 positions ellipses.
            let shape = match self.owner[p] {
                Player::P1 => "box",
                Player::P2 => "ellipse",
            };
            let style = if highlight.contains(&p) { ", style=bold" } else { "" };
            let label = self.labels[p].replace('"', "\\\"");
            let _ = writeln!(out, "  p{p} [shape={shape}{style}, label=\"{label}\\nrank {}\"];", self.rank[p]);
        }
        for (p, succs) in self.succ.iter().enumerate() {
            for q in succs {
                let _ = writeln!(out, "  p{p} -> p{q};");
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionalStrategy {
    pub player: Player,
    pub choice: HashMap<Pos, Pos>,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub winner: Vec<Player>,
    /// Winning move of the position's owner, where the owner wins and can move.
    pub choice: Vec<Option<Pos>>,
    /// Consistent signature assignment: defined exactly on player 1's region.
    pub alpha: Vec<Option<u64>>,
}

impl Solution {
    /// The positional strategy of `player` restricted to its winning region.
    pub fn strategy(&self, game: &WeakGame, player: Player) -> PositionalStrategy {
        let choice = (0..game.len())
            .filter(|&p| game.owner[p] == player && self.winner[p] == player)
            .filter_map(|p| self.choice[p].map(|q| (p, q)))
            .collect();
        PositionalStrategy { player, choice }
    }
}

/// Solves every position, stratum by stratum from the lowest rank up.
pub fn solve_all(game: &WeakGame) -> Solution {
    let n = game.len();
    debug_assert!(game.rank_violations().is_empty(), "ranks must not increase along edges");
    let pred = game.predecessors();
    let mut winner: Vec<Option<Player>> = vec![None; n];
    let mut choice: Vec<Option<Pos>> = vec![None; n];
    let mut alpha: Vec<Option<u64>> = vec![None; n];

    let mut ranks: Vec<u32> = game.rank.clone();
    ranks.sort_unstable();
    ranks.dedup();
    let mut by_rank: HashMap<u32, Vec<Pos>> = HashMap::new();
    for p in 0..n {
        by_rank.entry(game.rank[p]).or_default().push(p);
    }

    for r in ranks {
        let stratum = &by_rank[&r];
        // The player who would lose by staying here forever attracts.
        let target = Player::of_rank(r).opponent();
        let in_stratum = |q: Pos| game.rank[q] == r;
        let mut level: HashMap<Pos, u64> = HashMap::new();
        let mut remaining: HashMap<Pos, usize> = HashMap::new();
        let mut queue = std::collections::VecDeque::new();

        for &p in stratum {
            let succs = &game.succ[p];
            if game.owner[p] == target {
                if let Some(&q) = succs.iter().find(|&&q| !in_stratum(q) && winner[q] == Some(target)) {
                    level.insert(p, 0);
                    choice[p] = Some(q);
                    queue.push_back(p);
                }
            } else {
                let blocked = succs.iter().any(|&q| !in_stratum(q) && winner[q] != Some(target));
                if !blocked {
                    let inner = succs.iter().filter(|&&q| in_stratum(q)).count();
                    if inner == 0 {
                        level.insert(p, 0);
                        queue.push_back(p);
                    } else {
                        remaining.insert(p, inner);
                    }
                }
            }
        }
        while let Some(q) = queue.pop_front() {
            let lq = level[&q];
            for &p in &pred[q] {
                if !in_stratum(p) || level.contains_key(&p) {
                    continue;
                }
                if game.owner[p] == target {
                    level.insert(p, lq + 1);
                    choice[p] = Some(q);
                    queue.push_back(p);
                } else if let Some(c) = remaining.get_mut(&p) {
                    *c -= 1;
                    if *c == 0 {
                        level.insert(p, lq + 1);
                        queue.push_back(p);
                    }
                }
            }
        }

        let stayer = target.opponent();
        for &p in stratum {
            if let Some(&l) = level.get(&p) {
                winner[p] = Some(target);
                if target == Player::P1 {
                    alpha[p] = Some(l);
                }
            } else {
                winner[p] = Some(stayer);
                if stayer == Player::P1 {
                    alpha[p] = Some(0);
                }
                if game.owner[p] == stayer {
                    choice[p] = game.succ[p]
                        .iter()
                        .copied()
                        .find(|&q| if in_stratum(q) { !level.contains_key(&q) } else { winner[q] == Some(stayer) });
                }
            }
        }
    }

    Solution { winner: winner.into_iter().map(|w| w.expect("every stratum solved")).collect(), choice, alpha }
}

/// Winner from `p` and a positional winning strategy for that player.
pub fn solve(game: &WeakGame, p: Pos) -> (Player, PositionalStrategy) {
    let sol = solve_all(game);
    let w = sol.winner[p];
    (w, sol.strategy(game, w))
}

/// Positions reachable from `p` when `s.player` follows `s` and the
/// opponent moves freely; `None` if the strategy is undefined somewhere it
/// must move or picks a non-successor.
pub fn strategy_reach(game: &WeakGame, p: Pos, s: &PositionalStrategy) -> Option<Vec<Pos>> {
    let mut seen = vec![false; game.len()];
    let mut order = Vec::new();
    let mut stack = vec![p];
    seen[p] = true;
    while let Some(x) = stack.pop() {
        order.push(x);
        for y in restricted_succ(game, x, s)? {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    Some(order)
}

fn restricted_succ(game: &WeakGame, x: Pos, s: &PositionalStrategy) -> Option<Vec<Pos>> {
    if game.owner[x] == s.player && !game.succ[x].is_empty() {
        let c = *s.choice.get(&x)?;
        if !game.succ[x].contains(&c) {
            return None;
        }
        Some(vec![c])
    } else {
        Some(game.succ[x].clone())
    }
}

/// Whether every complete play from `p` consistent with `s` is won by `s.player`.
pub fn check_strategy(game: &WeakGame, p: Pos, s: &PositionalStrategy) -> bool {
    let Some(reach) = strategy_reach(game, p, s) else { return false };
    let mut graph: DiGraph<Pos, ()> = DiGraph::new();
    let mut node = HashMap::new();
    for &x in &reach {
        node.insert(x, graph.add_node(x));
    }
    for &x in &reach {
        let succs = restricted_succ(game, x, s).expect("checked during reach");
        if succs.is_empty() && game.owner[x] == s.player {
            return false;
        }
        for y in succs {
            graph.add_edge(node[&x], node[&y], ());
        }
    }
    for scc in tarjan_scc(&graph) {
        let cyclic = scc.len() > 1 || graph.contains_edge(scc[0], scc[0]);
        if cyclic {
            let rank = game.rank[graph[scc[0]]];
            if Player::of_rank(rank) != s.player {
                return false;
            }
        }
    }
    true
}

/// A consistent signature assignment whose domain is player 1's winning region.
pub fn signature(game: &WeakGame) -> Vec<Option<u64>> {
    solve_all(game).alpha
}

/// Checks both consistency conditions of a signature assignment.
pub fn check_signature(game: &WeakGame, alpha: &[Option<u64>]) -> bool {
    let key = |q: Pos| alpha[q].map(|a| (game.rank[q], a));
    (0..game.len()).all(|p| {
        let Some(here) = key(p) else { return true };
        let strict = game.rank[p] % 2 == 1;
        let ok = |q: Pos| match key(q) {
            Some(k) => {
                if strict {
                    k < here
                } else {
                    k <= here
                }
            }
            None => false,
        };
        match game.owner[p] {
            Player::P1 => game.succ[p].iter().any(|&q| ok(q)),
            Player::P2 => game.succ[p].iter().all(|&q| ok(q)),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dead_ends() {
        let mut g = WeakGame::new();
        let p = g.add_position(Player::P2, 0, "end");
        let (w, s) = solve(&g, p);
        assert_eq!(w, Player::P1);
        assert!(check_strategy(&g, p, &s));
        assert_eq!(signature(&g)[p], Some(0));

        let mut g = WeakGame::new();
        let p = g.add_position(Player::P1, 0, "stuck");
        assert_eq!(solve(&g, p).0, Player::P2);
        assert_eq!(signature(&g)[p], None);
    }

    #[test]
    fn self_loops_follow_parity() {
        let mut g = WeakGame::new();
        let p = g.add_position(Player::P1, 2, "even");
        g.add_edge(p, p);
        let (w, s) = solve(&g, p);
        assert_eq!(w, Player::P1);
        assert!(check_strategy(&g, p, &s));
        let empty = PositionalStrategy { player: Player::P2, choice: HashMap::new() };
        assert!(!check_strategy(&g, p, &empty));

        let mut g = WeakGame::new();
        let p = g.add_position(Player::P1, 1, "odd");
        g.add_edge(p, p);
        assert_eq!(solve(&g, p).0, Player::P2);
        assert_eq!(signature(&g)[p], None);
    }

    #[test]
    fn escape_to_lower_rank() {
        // P1 at odd rank may loop (losing) or drop to an even sink.
        let mut g = WeakGame::new();
        let top = g.add_position(Player::P1, 3, "top");
        let sink = g.add_position(Player::P2, 0, "sink");
        g.add_edge(top, top);
        g.add_edge(top, sink);
        g.add_edge(sink, sink);
        let sol = solve_all(&g);
        assert_eq!(sol.winner[top], Player::P1);
        assert_eq!(sol.choice[top], Some(sink));
        assert!(check_signature(&g, &sol.alpha));
    }
}
