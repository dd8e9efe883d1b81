"""
Canonical decision trees for the independent, block and pigeonhole settings.

Every setting is a decision procedure that repeatedly finds the first term
not falsified by the current restriction and queries its unset part. The
procedures are written as node expansions; building the full tree, the
pruned depth check, the first long branch and branch iteration are shared.

Date: 2026-10-18
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Final, Hashable, Iterator, List, Optional, Sequence, Tuple, Union

from .block import BlockClass, BlockOutcome, BlockTag, first_star, validate_outcome
from .cache import ResultCache
from .exceptions import FormulaError, PreconditionError, TreeTooDeepError
from .formula import BlockStructure, Dnf, Restriction, Value
from .php import PartialInjection


__all__: Final[List[str]] = [
    "MAX_TREE_DEPTH",
    "Branch",
    "BlockTree",
    "CanonicalTree",
    "DecisionTree",
    "IndependentTree",
    "Leaf",
    "LeafLabel",
    "PhpTree",
    "Query",
    "QueryKind",
    "QueryNode",
    "Reply",
    "Round",
    "Trace",
    "build_tree_block",
    "build_tree_indep",
    "build_tree_php",
    "depth_at_least",
    "iter_branches",
    "trace_first_long_branch",
    "tree_depth",
]


MAX_TREE_DEPTH: Final[int] = 20


class LeafLabel(Enum):
    """
    The output at the end of a branch.
    """

    ZERO = "0"
    ONE = "1"
    ERROR = "error"


class QueryKind(Enum):
    """
    What an internal node asks.
    """

    VARIABLE = "variable"
    BLOCK = "block"
    PIGEON = "pigeon"
    HOLE = "hole"


@dataclass(frozen=True)
class Query:
    """
    A question asked at an internal node.

    Attributes:
        kind (QueryKind): The kind of question.
        subject (int): The variable, block, pigeon or hole asked about.
        variable (Optional[int]): For block queries, the starred variable actually queried.
    """

    kind: QueryKind
    subject: int
    variable: Optional[int] = None


@dataclass(frozen=True)
class Leaf:
    """
    A leaf of a decision tree.

    Attributes:
        label (LeafLabel): The output.
    """

    label: LeafLabel


@dataclass(frozen=True)
class QueryNode:
    """
    An internal node of a decision tree.

    Attributes:
        query (Query): The question.
        children (Tuple[Tuple[int, DecisionTree], ...]): The subtree of every answer, in answer order.
    """

    query: Query
    children: Tuple[Tuple[int, "DecisionTree"], ...]

    def child(
        self,
        answer: int,
    ) -> "DecisionTree":
        """
        Returns the subtree reached by an answer.

        :param answer: The answer
        :type answer: int

        :return: The subtree
        :rtype: DecisionTree
        """

        for value, subtree in self.children:
            if value == answer:
                return subtree

        raise KeyError(answer)


DecisionTree = Union[Leaf, QueryNode]


def tree_depth(tree: DecisionTree) -> int:
    """
    Returns the height of a materialised tree.

    :param tree: The tree
    :type tree: DecisionTree

    :return: The length of its longest branch
    :rtype: int
    """

    if isinstance(tree, Leaf):
        return 0

    return 1 + max(tree_depth(subtree) for _, subtree in tree.children)


@dataclass(frozen=True)
class Reply:
    """
    One answered query on a branch.

    Attributes:
        query (Query): The question.
        answer (int): The answer.
        item (int): The entry of the round's list (variable, block or literal location) it serves.
    """

    query: Query
    answer: int
    item: int


@dataclass(frozen=True)
class Round:
    """
    One round of the decision procedure along a branch.

    Attributes:
        term_index (int): The index of the term C_i in the scanned formula.
        beta (Tuple[int, ...]): Variables (independent), blocks (block) or literal locations (pigeonhole).
        replies (Tuple[Reply, ...]): The answered queries, in order.
    """

    term_index: int
    beta: Tuple[int, ...]
    replies: Tuple[Reply, ...]

    @property
    def pi(self) -> Tuple[int, ...]:
        """
        Returns the answers of the round in query order.

        :return: The answers
        :rtype: Tuple[int, ...]
        """

        return tuple(reply.answer for reply in self.replies)


@dataclass(frozen=True)
class Trace:
    """
    The rounds of the first branch of length at least s, trimmed to its first s queries.

    Attributes:
        s (int): The number of queries kept.
        rounds (Tuple[Round, ...]): The rounds.
    """

    s: int
    rounds: Tuple[Round, ...]

    @property
    def queries(self) -> int:
        """
        Returns the number of queries in the trace.

        :return: The number of replies over all rounds
        :rtype: int
        """

        return sum(len(round_.replies) for round_ in self.rounds)


@dataclass(frozen=True)
class Branch:
    """
    A root-to-leaf branch of a canonical tree.

    Attributes:
        path (Tuple[Tuple[Query, int], ...]): The queries and answers.
        label (LeafLabel): The output at the leaf.
        assignment (Union[Restriction, PartialInjection]): The starting restriction extended by the answers.
    """

    path: Tuple[Tuple[Query, int], ...]
    label: LeafLabel
    assignment: Union[Restriction, PartialInjection]


@dataclass(frozen=True)
class _Cursor:
    """
    The position of the procedure inside a round.
    """

    index: int
    term_index: int
    items: tuple
    position: int = 0
    phase: int = 0

    def advance(self) -> "_Cursor":
        return _Cursor(self.index, self.term_index, self.items, self.position + 1, 0)

    def with_phase(
        self,
        phase: int,
    ) -> "_Cursor":
        return _Cursor(self.index, self.term_index, self.items, self.position, phase)

    @property
    def exhausted(self) -> bool:
        return self.position >= len(self.items)


@dataclass(frozen=True)
class _State:
    """
    The restriction (or injection) built so far together with the round cursor.
    """

    assignment: tuple
    cursor: Optional[_Cursor]


@dataclass(frozen=True)
class _Expansion:
    """
    An internal node produced by a node expansion.
    """

    query: Query
    cursor: _Cursor
    item: int
    children: Tuple[Tuple[int, _State], ...]


@dataclass(frozen=True)
class _Step:
    """
    One edge of a branch as seen by the trace builder.
    """

    query: Query
    answer: int
    cursor: _Cursor
    item: int


def _residual(
    literals: Sequence[Tuple[int, bool]],
    values: Sequence[int],
) -> Optional[Tuple[Tuple[int, bool], ...]]:
    """
    Returns the starred literals of a term, or None if the term is falsified.
    """

    kept: List[Tuple[int, bool]] = []

    for var, positive in literals:
        value: int = values[var]

        if value == Value.STAR:
            kept.append((var, positive))
        elif (value == Value.ONE) != positive:
            return None

    return tuple(kept)


def _first_alive(
    terms: Sequence[Sequence[Tuple[int, bool]]],
    values: Sequence[int],
) -> Optional[int]:
    for index, literals in enumerate(terms):
        if _residual(literals, values) is not None:
            return index

    return None


class CanonicalTree(ABC):
    """
    A canonical decision tree given by its node expansion.

    Answers are explored in ascending order, so the first branch is the
    leftmost one: 0 before 1 for variable and block queries, ascending hole
    or pigeon index for pigeonhole queries.

    Attributes:
        cache (Optional[ResultCache]): The memo for pruned depth checks.
    """

    # Distinguishes cache keys of different settings
    _KIND: str = "tree"

    def __init__(
        self,
        cache: Optional[ResultCache] = None,
    ) -> None:
        """
        Initialize the tree.

        :param cache: The memo for pruned depth checks. Defaults to None.
        :type cache: Optional[ResultCache]

        :return: None
        :rtype: None
        """

        self._cache: Optional[ResultCache] = cache

    @abstractmethod
    def _root(self) -> _State:
        """
        Returns the state at the root.
        """

    @abstractmethod
    def _expand(
        self,
        state: _State,
    ) -> Union[LeafLabel, _Expansion]:
        """
        Returns the leaf label or the query and child states of a node.
        """

    @abstractmethod
    def _assignment(
        self,
        state: _State,
    ) -> Union[Restriction, PartialInjection]:
        """
        Returns the restriction or injection a state stands for.
        """

    @abstractmethod
    def first_alive(
        self,
        assignment: Union[Restriction, PartialInjection],
    ) -> Optional[int]:
        """
        Returns the index of the first term not falsified by an assignment, or None.
        """

    def _boundary_key(
        self,
        state: _State,
    ) -> Optional[Hashable]:
        """
        Returns a key that determines the subtree below a round boundary, or None.
        """

        return None

    def _round_beta(
        self,
        steps: Sequence[_Step],
        is_last: bool,
    ) -> Tuple[int, ...]:
        """
        Returns the trimmed list of a round from its steps.
        """

        return tuple(step.item for step in steps)

    def build(self) -> DecisionTree:
        """
        Materialises the full tree.

        :return: The tree
        :rtype: DecisionTree
        """

        return self._build(self._root(), 0)

    def _build(
        self,
        state: _State,
        depth: int,
    ) -> DecisionTree:
        node: Union[LeafLabel, _Expansion] = self._expand(state)

        if isinstance(node, LeafLabel):
            return Leaf(node)

        if depth >= MAX_TREE_DEPTH:
            raise TreeTooDeepError(f"tree is deeper than {MAX_TREE_DEPTH}")

        return QueryNode(
            query=node.query,
            children=tuple((answer, self._build(child, depth + 1)) for answer, child in node.children),
        )

    def depth(self) -> int:
        """
        Returns the height of the tree without materialising it.

        :return: The length of the longest branch
        :rtype: int
        """

        return self._height(self._root(), 0)

    def _height(
        self,
        state: _State,
        depth: int,
    ) -> int:
        node: Union[LeafLabel, _Expansion] = self._expand(state)

        if isinstance(node, LeafLabel):
            return 0

        if depth >= MAX_TREE_DEPTH:
            raise TreeTooDeepError(f"tree is deeper than {MAX_TREE_DEPTH}")

        return 1 + max(self._height(child, depth + 1) for _, child in node.children)

    def depth_at_least(
        self,
        s: int,
    ) -> bool:
        """
        Returns True if the tree has height s or greater, exploring at most s levels.

        :param s: The threshold
        :type s: int

        :return: True if some branch asks at least s queries
        :rtype: bool
        """

        return self._reaches(self._root(), s)

    def _reaches(
        self,
        state: _State,
        s: int,
    ) -> bool:
        if s <= 0:
            return True

        key: Optional[Hashable] = None

        if self._cache is not None:
            key = self._boundary_key(state)

            if key is not None:
                key = (self._KIND, key, s)
                cached: Optional[bool] = self._cache.get(key)

                if cached is not None:
                    return cached

        node: Union[LeafLabel, _Expansion] = self._expand(state)

        if isinstance(node, LeafLabel):
            result: bool = False
        else:
            result = any(self._reaches(child, s - 1) for _, child in node.children)

        if key is not None:
            self._cache.set(key, result)

        return result

    def first_long_branch(
        self,
        s: int,
    ) -> Optional[List[_Step]]:
        """
        Returns the first s edges of the first branch of length at least s, or None.
        """

        if s < 1:
            raise PreconditionError(f"s must be at least 1, got {s}")

        path: List[_Step] = []

        if self._first(self._root(), s, path):
            return path

        return None

    def _first(
        self,
        state: _State,
        s: int,
        path: List[_Step],
    ) -> bool:
        if s == 0:
            return True

        node: Union[LeafLabel, _Expansion] = self._expand(state)

        if isinstance(node, LeafLabel):
            return False

        for answer, child in node.children:
            if not self._reaches(child, s - 1):
                continue

            path.append(_Step(node.query, answer, node.cursor, node.item))

            if self._first(child, s - 1, path):
                return True

            path.pop()

        return False

    def trace(
        self,
        s: int,
    ) -> Optional[Trace]:
        """
        Returns the trace of the first branch of length at least s, trimmed to s queries.

        :param s: The number of queries
        :type s: int

        :return: The trace, or None if the tree has height below s
        :rtype: Optional[Trace]
        """

        steps: Optional[List[_Step]] = self.first_long_branch(s)

        if steps is None:
            return None

        # Group consecutive steps by round
        groups: List[List[_Step]] = []

        for step in steps:
            if groups and groups[-1][0].cursor.index == step.cursor.index:
                groups[-1].append(step)
            else:
                groups.append([step])

        rounds: List[Round] = []

        for position, group in enumerate(groups):
            rounds.append(
                Round(
                    term_index=group[0].cursor.term_index,
                    beta=self._round_beta(group, position == len(groups) - 1),
                    replies=tuple(Reply(step.query, step.answer, step.item) for step in group),
                )
            )

        return Trace(s=s, rounds=tuple(rounds))

    def branches(self) -> Iterator[Branch]:
        """
        Iterates over every root-to-leaf branch in answer order.

        :return: The branches
        :rtype: Iterator[Branch]
        """

        yield from self._branches(self._root(), ())

    def _branches(
        self,
        state: _State,
        path: Tuple[Tuple[Query, int], ...],
    ) -> Iterator[Branch]:
        node: Union[LeafLabel, _Expansion] = self._expand(state)

        if isinstance(node, LeafLabel):
            yield Branch(path=path, label=node, assignment=self._assignment(state))
            return

        if len(path) >= MAX_TREE_DEPTH:
            raise TreeTooDeepError(f"tree is deeper than {MAX_TREE_DEPTH}")

        for answer, child in node.children:
            yield from self._branches(child, path + ((node.query, answer),))


class IndependentTree(CanonicalTree):
    """
    The canonical tree of a DNF under a restriction that sets variables independently.

    Each round queries the starred variables of the first term that is not
    falsified, in the order they appear in the term.
    """

    _KIND: str = "independent"

    def __init__(
        self,
        formula: Dnf,
        rho: Restriction,
        cache: Optional[ResultCache] = None,
    ) -> None:
        """
        Initialize the tree.

        :param formula: The DNF
        :type formula: Dnf
        :param rho: The restriction, total over the DNF's universe
        :type rho: Restriction
        :param cache: The memo for pruned depth checks. Defaults to None.
        :type cache: Optional[ResultCache]

        :return: None
        :rtype: None
        """

        super().__init__(cache=cache)

        if rho.n != formula.n:
            raise FormulaError(f"restriction over {rho.n} variables, DNF over {formula.n}")

        self._formula: Final[Dnf] = formula
        self._rho: Final[Restriction] = rho
        self._terms: Final[Tuple[Tuple[Tuple[int, bool], ...], ...]] = tuple(
            tuple((literal.var, literal.positive) for literal in term.literals)
            for term in formula.terms
        )

    def _root(self) -> _State:
        return _State(self._rho.values, None)

    def _assignment(
        self,
        state: _State,
    ) -> Restriction:
        return Restriction(state.assignment)

    def first_alive(
        self,
        assignment: Restriction,
    ) -> Optional[int]:
        return _first_alive(self._terms, assignment.values)

    def _boundary_key(
        self,
        state: _State,
    ) -> Optional[Hashable]:
        if state.cursor is not None and not state.cursor.exhausted:
            return None

        residuals: List[tuple] = []

        for literals in self._terms:
            residual = _residual(literals, state.assignment)

            if residual is not None:
                residuals.append(residual)

        return tuple(residuals)

    def _expand(
        self,
        state: _State,
    ) -> Union[LeafLabel, _Expansion]:
        values: tuple = state.assignment
        cursor: Optional[_Cursor] = state.cursor

        if cursor is not None and not cursor.exhausted:
            var: int = cursor.items[cursor.position]
            following: _Cursor = cursor.advance()
            children: List[Tuple[int, _State]] = []

            for answer in (Value.ZERO, Value.ONE):
                updated: list = list(values)
                updated[var] = answer
                children.append((int(answer), _State(tuple(updated), following)))

            return _Expansion(Query(QueryKind.VARIABLE, var), cursor, var, tuple(children))

        # The round's term is satisfied by the replies
        if cursor is not None and _residual(self._terms[cursor.term_index], values) == ():
            return LeafLabel.ONE

        for index, literals in enumerate(self._terms):
            residual = _residual(literals, values)

            if residual is None:
                continue

            if not residual:
                return LeafLabel.ONE

            started: _Cursor = _Cursor(
                index=0 if cursor is None else cursor.index + 1,
                term_index=index,
                items=tuple(var for var, _ in residual),
            )

            return self._expand(_State(values, started))

        return LeafLabel.ZERO


class BlockTree(CanonicalTree):
    """
    The canonical tree of a DNF under an outcome of the block distribution.

    Each round lists the blocks with a starred variable in the first term
    that is not falsified, in order of appearance, and queries the single
    starred variable each block keeps under g(rho). The reply fixes the whole
    block: the queried variable gets the answer and every other starred
    variable of the block becomes 1.
    """

    _KIND: str = "block"

    def __init__(
        self,
        formula: Dnf,
        outcome: BlockOutcome,
        blocks: BlockStructure,
        cache: Optional[ResultCache] = None,
    ) -> None:
        """
        Initialize the tree.

        :param formula: The DNF
        :type formula: Dnf
        :param outcome: The restriction and its block tags
        :type outcome: BlockOutcome
        :param blocks: The block structure
        :type blocks: BlockStructure
        :param cache: The memo for pruned depth checks. Defaults to None.
        :type cache: Optional[ResultCache]

        :return: None
        :rtype: None
        """

        super().__init__(cache=cache)

        if outcome.restriction.n != formula.n or blocks.n != formula.n:
            raise FormulaError("DNF, restriction and blocks must share one universe")

        validate_outcome(outcome.restriction, outcome.classes, blocks)

        self._blocks: Final[BlockStructure] = blocks
        self._formula: Final[Dnf] = formula
        self._outcome: Final[BlockOutcome] = outcome
        self._terms: Final[Tuple[Tuple[Tuple[int, bool], ...], ...]] = tuple(
            tuple((literal.var, literal.positive) for literal in term.literals)
            for term in formula.terms
        )

        # The variable that survives g(rho) in every *-block
        self._queried: Final[Tuple[int, ...]] = tuple(
            first_star(outcome.restriction.values, block)
            if tag is BlockTag.STAR_BLOCK
            else -1
            for block, tag in zip(blocks.blocks, outcome.classes.tags)
        )

    def _root(self) -> _State:
        return _State(self._outcome.restriction.values, None)

    def _assignment(
        self,
        state: _State,
    ) -> Restriction:
        return Restriction(state.assignment)

    def first_alive(
        self,
        assignment: Restriction,
    ) -> Optional[int]:
        return _first_alive(self._terms, assignment.values)

    def _boundary_key(
        self,
        state: _State,
    ) -> Optional[Hashable]:
        if state.cursor is not None and not state.cursor.exhausted:
            return None

        values: tuple = state.assignment
        residuals: List[tuple] = []
        touched: set = set()

        for literals in self._terms:
            residual = _residual(literals, values)

            if residual is not None:
                residuals.append(residual)
                touched.update(self._blocks.block_of[var] for var, _ in residual)

        stars: tuple = tuple(
            tuple(var for var in self._blocks.blocks[block] if values[var] == Value.STAR)
            for block in sorted(touched)
        )

        return tuple(residuals), stars

    def _expand(
        self,
        state: _State,
    ) -> Union[LeafLabel, _Expansion]:
        values: tuple = state.assignment
        cursor: Optional[_Cursor] = state.cursor

        if cursor is not None and not cursor.exhausted:
            block: int = cursor.items[cursor.position]
            queried: int = self._queried[block]
            following: _Cursor = cursor.advance()
            children: List[Tuple[int, _State]] = []

            for answer in (Value.ZERO, Value.ONE):
                updated: list = list(values)

                for var in self._blocks.blocks[block]:
                    if updated[var] == Value.STAR:
                        updated[var] = answer if var == queried else Value.ONE

                children.append((int(answer), _State(tuple(updated), following)))

            return _Expansion(
                Query(QueryKind.BLOCK, block, queried), cursor, block, tuple(children)
            )

        if cursor is not None and _residual(self._terms[cursor.term_index], values) == ():
            return LeafLabel.ONE

        for index, literals in enumerate(self._terms):
            residual = _residual(literals, values)

            if residual is None:
                continue

            if not residual:
                return LeafLabel.ONE

            # Blocks in order of first appearance
            order: List[int] = list(dict.fromkeys(self._blocks.block_of[var] for var, _ in residual))

            started: _Cursor = _Cursor(
                index=0 if cursor is None else cursor.index + 1,
                term_index=index,
                items=tuple(order),
            )

            return self._expand(_State(values, started))

        return LeafLabel.ZERO


class PhpTree(CanonicalTree):
    """
    The canonical tree of a preprocessed pigeonhole DNF under a partial injection.

    Each round takes the unset literals p_xy of the first term that is not
    falsified and, for each in order, asks where pigeon x goes and then which
    pigeon goes to hole y. A query whose answer is already fixed by the
    branch is skipped and not counted. A query with no free hole or pigeon
    left ends the branch in an error leaf.
    """

    _KIND: str = "php"

    def __init__(
        self,
        formula: Dnf,
        rho: PartialInjection,
        n: int,
    ) -> None:
        """
        Initialize the tree.

        :param formula: The preprocessed DNF, positive literals only
        :type formula: Dnf
        :param rho: The partial injection
        :type rho: PartialInjection
        :param n: The number of holes
        :type n: int

        :return: None
        :rtype: None
        """

        super().__init__(cache=None)

        if rho.n != n or formula.n != (n + 1) * n:
            raise FormulaError("DNF and partial injection must share one pigeonhole instance")

        if any(not literal.positive for term in formula.terms for literal in term.literals):
            raise FormulaError("the pigeonhole tree needs a preprocessed DNF without negations")

        self._n: Final[int] = n
        self._rho: Final[PartialInjection] = rho
        self._terms: Final[Tuple[Tuple[Tuple[int, int, int], ...], ...]] = tuple(
            tuple(
                (location, *divmod(literal.var, n))
                for location, literal in enumerate(term.literals)
            )
            for term in formula.terms
        )

    def _root(self) -> _State:
        return _State(self._rho.mapping, None)

    def _assignment(
        self,
        state: _State,
    ) -> PartialInjection:
        return PartialInjection(n=self._n, mapping=state.assignment)

    def first_alive(
        self,
        assignment: PartialInjection,
    ) -> Optional[int]:
        """
        Returns the index of the first term not falsified by a partial injection, or None.

        :param assignment: The partial injection
        :type assignment: PartialInjection

        :return: The term index
        :rtype: Optional[int]
        """

        mapping: tuple = assignment.mapping
        owners: tuple = assignment.owners

        for index, literals in enumerate(self._terms):
            if all(
                mapping[pigeon] == hole or (mapping[pigeon] is None and owners[hole] is None)
                for _, pigeon, hole in literals
            ):
                return index

        return None

    def _owners(
        self,
        mapping: tuple,
    ) -> List[Optional[int]]:
        owners: List[Optional[int]] = [None] * self._n

        for pigeon, hole in enumerate(mapping):
            if hole is not None:
                owners[hole] = pigeon

        return owners

    def _round_beta(
        self,
        steps: Sequence[_Step],
        is_last: bool,
    ) -> Tuple[int, ...]:
        items: tuple = steps[0].cursor.items

        # A literal belongs to the trimmed round iff it starts before the s-th query ends
        last: int = max(step.cursor.position for step in steps) if is_last else len(items) - 1

        return tuple(location for location, _, _ in items[: last + 1])

    def _expand(
        self,
        state: _State,
    ) -> Union[LeafLabel, _Expansion]:
        mapping: tuple = state.assignment
        cursor: Optional[_Cursor] = state.cursor
        owners: List[Optional[int]] = self._owners(mapping)

        while cursor is not None and not cursor.exhausted:
            location, pigeon, hole = cursor.items[cursor.position]

            if cursor.phase == 0:
                if mapping[pigeon] is not None:
                    cursor = cursor.with_phase(1)
                    continue

                free_holes: List[int] = [y for y in range(self._n) if owners[y] is None]

                if not free_holes:
                    return LeafLabel.ERROR

                following: _Cursor = cursor.with_phase(1)
                children: List[Tuple[int, _State]] = []

                for answer in free_holes:
                    updated: list = list(mapping)
                    updated[pigeon] = answer
                    children.append((answer, _State(tuple(updated), following)))

                return _Expansion(Query(QueryKind.PIGEON, pigeon), cursor, location, tuple(children))

            if owners[hole] is not None:
                cursor = cursor.advance()
                continue

            free_pigeons: List[int] = [x for x, target in enumerate(mapping) if target is None]

            if not free_pigeons:
                return LeafLabel.ERROR

            following = cursor.advance()
            children = []

            for answer in free_pigeons:
                updated = list(mapping)
                updated[answer] = hole
                children.append((answer, _State(tuple(updated), following)))

            return _Expansion(Query(QueryKind.HOLE, hole), cursor, location, tuple(children))

        if cursor is not None and all(
            mapping[pigeon] == hole for _, pigeon, hole in self._terms[cursor.term_index]
        ):
            return LeafLabel.ONE

        for index, literals in enumerate(self._terms):
            residual: List[Tuple[int, int, int]] = []
            falsified: bool = False

            for location, pigeon, hole in literals:
                if mapping[pigeon] == hole:
                    continue

                if mapping[pigeon] is not None or owners[hole] is not None:
                    falsified = True
                    break

                residual.append((location, pigeon, hole))

            if falsified:
                continue

            if not residual:
                return LeafLabel.ONE

            started: _Cursor = _Cursor(
                index=0 if cursor is None else cursor.index + 1,
                term_index=index,
                items=tuple(residual),
            )

            return self._expand(_State(mapping, started))

        return LeafLabel.ZERO


def build_tree_indep(
    formula: Dnf,
    rho: Restriction,
) -> DecisionTree:
    """
    Builds the canonical tree T(F, rho) for the independent setting.

    :param formula: The DNF
    :type formula: Dnf
    :param rho: The restriction
    :type rho: Restriction

    :return: The tree
    :rtype: DecisionTree
    """

    return IndependentTree(formula, rho).build()


def build_tree_block(
    formula: Dnf,
    rho: Restriction,
    classes: BlockClass,
    blocks: BlockStructure,
) -> DecisionTree:
    """
    Builds the canonical tree T(F, rho) for the block setting.

    :param formula: The DNF
    :type formula: Dnf
    :param rho: The restriction
    :type rho: Restriction
    :param classes: The block tags
    :type classes: BlockClass
    :param blocks: The block structure
    :type blocks: BlockStructure

    :return: The tree
    :rtype: DecisionTree
    """

    return BlockTree(formula, BlockOutcome(rho, classes), blocks).build()


def build_tree_php(
    fprime: Dnf,
    rho: PartialInjection,
    n: int,
) -> DecisionTree:
    """
    Builds the canonical tree T(F, rho) for the pigeonhole setting.

    :param fprime: The preprocessed DNF
    :type fprime: Dnf
    :param rho: The partial injection
    :type rho: PartialInjection
    :param n: The number of holes
    :type n: int

    :return: The tree
    :rtype: DecisionTree
    """

    return PhpTree(fprime, rho, n).build()


def iter_branches(tree: CanonicalTree) -> Iterator[Branch]:
    """
    Iterates over the branches of a canonical tree with their leaves and final assignments.

    :param tree: The tree inputs
    :type tree: CanonicalTree

    :return: The branches in answer order
    :rtype: Iterator[Branch]
    """

    return tree.branches()


def depth_at_least(
    tree: CanonicalTree,
    s: int,
) -> bool:
    """
    Returns True if a canonical tree has height s or greater.

    :param tree: The tree inputs
    :type tree: CanonicalTree
    :param s: The threshold, at least 1
    :type s: int

    :return: True if some branch asks at least s queries
    :rtype: bool
    """

    if s < 1:
        raise PreconditionError(f"s must be at least 1, got {s}")

    return tree.depth_at_least(s)


def trace_first_long_branch(
    tree: CanonicalTree,
    s: int,
) -> Optional[Trace]:
    """
    Returns the trimmed trace of the first branch with at least s queries.

    :param tree: The tree inputs
    :type tree: CanonicalTree
    :param s: The number of queries, at least 1
    :type s: int

    :return: The trace, or None if the tree has height below s
    :rtype: Optional[Trace]
    """

    return tree.trace(s)
