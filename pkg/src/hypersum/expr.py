"""Expression trees: parsing, printing, differentiation, exact evaluation.

The grammar is small and frozen:

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := ('-')? postfix ('^' factor)?
    postfix:= atom ('!')*
    atom   := number | symbol | call | '(' expr ')'
    call   := name '(' expr (',' expr)* ')'
    number := integer ('/' integer)?

``!`` binds tighter than ``^``, ``^`` is right-associative, and unary minus
binds looser than ``^``.  A rational literal like ``1/2`` is fused into one
number unless followed by ``^`` or ``!`` (where the division reading is the
only sensible one).  Bracketed lists ``[a, b]`` are accepted as call
arguments for the hypergeometric constructors.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .poly import MPoly, RatFunc

# ---------------------------------------------------------------------------
# nodes
# ---------------------------------------------------------------------------


class Expr:
    __slots__ = ()

    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __mul__(self, other):
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __sub__(self, other):
        return add(self, neg(_coerce(other)))

    def __rsub__(self, other):
        return add(_coerce(other), neg(self))

    def __neg__(self):
        return neg(self)

    def __truediv__(self, other):
        return mul(self, pow_(_coerce(other), Num(-1)))

    def __rtruediv__(self, other):
        return mul(_coerce(other), pow_(self, Num(-1)))

    def __pow__(self, other):
        return pow_(self, _coerce(other))

    def __repr__(self):
        return f"Expr[{to_string(self)}]"

    def __eq__(self, other):
        return isinstance(other, Expr) and _node(self) == _node(other)

    def __hash__(self):
        return hash(_node(self))


def _node(e):
    return (type(e).__name__,) + tuple(
        _node(c) if isinstance(c, Expr) else c for c in e.children()
    )


class Num(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = Fraction(value)

    def children(self):
        return (self.value,)


class Sym(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def children(self):
        return (self.name,)


class Add(Expr):
    __slots__ = ("args",)

    def __init__(self, args):
        self.args = tuple(args)

    def children(self):
        return self.args


class Mul(Expr):
    __slots__ = ("args",)

    def __init__(self, args):
        self.args = tuple(args)

    def children(self):
        return self.args


class Pow(Expr):
    __slots__ = ("base", "exponent")

    def __init__(self, base, exponent):
        self.base = base
        self.exponent = exponent

    def children(self):
        return (self.base, self.exponent)


class Factorial(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg

    def children(self):
        return (self.arg,)


class Binomial(Expr):
    __slots__ = ("top", "bottom")

    def __init__(self, top, bottom):
        self.top = top
        self.bottom = bottom

    def children(self):
        return (self.top, self.bottom)


class Pochhammer(Expr):
    __slots__ = ("base", "count")

    def __init__(self, base, count):
        self.base = base
        self.count = count

    def children(self):
        return (self.base, self.count)


class Gamma(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg

    def children(self):
        return (self.arg,)


class Call(Expr):
    __slots__ = ("name", "args")

    def __init__(self, name, args):
        self.name = name
        self.args = tuple(args)

    def children(self):
        return (self.name,) + self.args


class ExprList(Expr):
    """Bracketed argument list, only valid inside hypergeometric calls."""

    __slots__ = ("items",)

    def __init__(self, items):
        self.items = tuple(items)

    def children(self):
        return self.items


FUNCTIONS = ("exp", "ln", "sin", "cos", "arcsin", "arctan", "sqrt", "erf", "besselj")
SPECIAL_CALLS = ("binomial", "pochhammer", "gamma", "factorial", "hyperterm", "hypergeom")


def _coerce(x):
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Num(x)
    raise TypeError(f"cannot interpret {x!r} as an expression")


# ---------------------------------------------------------------------------
# canonical constructors
# ---------------------------------------------------------------------------

_RANK = {
    "Num": 0,
    "Sym": 1,
    "Pow": 2,
    "Factorial": 3,
    "Binomial": 4,
    "Pochhammer": 5,
    "Gamma": 6,
    "Call": 7,
    "Add": 8,
    "Mul": 9,
    "ExprList": 10,
}


def _key(e):
    return (_RANK[type(e).__name__],) + tuple(
        _key(c) if isinstance(c, Expr) else (-1, str(c)) for c in e.children()
    )


def add(*args) -> Expr:
    flat = []
    const = Fraction(0)
    for a in args:
        a = _coerce(a)
        if isinstance(a, Add):
            flat.extend(a.args)
        elif isinstance(a, Num):
            const += a.value
        else:
            flat.append(a)
    extra = []
    out = []
    for a in flat:
        if isinstance(a, Num):
            const += a.value
        else:
            out.append(a)
    out.sort(key=_key)
    if const:
        out.append(Num(const))
    if not out:
        return Num(0)
    if len(out) == 1:
        return out[0]
    return Add(out)


def mul(*args) -> Expr:
    flat = []
    const = Fraction(1)
    for a in args:
        a = _coerce(a)
        if isinstance(a, Mul):
            flat.extend(a.args)
        else:
            flat.append(a)
    out = []
    for a in flat:
        if isinstance(a, Num):
            const *= a.value
        else:
            out.append(a)
    if const == 0:
        return Num(0)
    out.sort(key=_key)
    if const != 1:
        out.insert(0, Num(const))
    if not out:
        return Num(1)
    if len(out) == 1:
        return out[0]
    return Mul(out)


def neg(e: Expr) -> Expr:
    return mul(Num(-1), e)


def pow_(base: Expr, exponent: Expr) -> Expr:
    base = _coerce(base)
    exponent = _coerce(exponent)
    if isinstance(exponent, Num):
        if exponent.value == 1:
            return base
        if exponent.value == 0:
            return Num(1)
        if isinstance(base, Num) and exponent.value.denominator == 1:
            v = exponent.value.numerator
            if v >= 0 or base.value != 0:
                return Num(base.value ** v)
    return Pow(base, exponent)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message, position, expected=()):
        super().__init__(f"{message} at position {position}"
                         + (f" (expected one of: {', '.join(expected)})" if expected else ""))
        self.position = position
        self.expected = tuple(expected)


def _tokenize(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
        elif c in "+-*/^!(),[]":
            tokens.append((c, c, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self, ahead=0):
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self):
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, kind):
        t = self.peek()
        if t[0] != kind:
            raise ParseError(f"unexpected {t[1]!r}", t[2], (kind,))
        return self.next()

    def parse(self):
        e = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", t[2], ("end of input",))
        return e

    def expr(self):
        terms = [self.term()]
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            t = self.term()
            terms.append(t if op == "+" else neg(t))
        return add(*terms)

    def term(self):
        factors = [self.factor()]
        while self.peek()[0] in ("*", "/"):
            op = self.next()[0]
            f = self.factor()
            factors.append(f if op == "*" else pow_(f, Num(-1)))
        return mul(*factors)

    def factor(self):
        if self.peek()[0] == "-":
            self.next()
            return neg(self.factor())
        base = self.postfix()
        if self.peek()[0] == "^":
            self.next()
            return pow_(base, self.factor())
        return base

    def postfix(self):
        e = self.atom()
        while self.peek()[0] == "!":
            self.next()
            e = Factorial(e)
        return e

    def atom(self):
        t = self.peek()
        if t[0] == "int":
            self.next()
            value = Fraction(int(t[1]))
            # fuse "p/q" into a rational literal unless a tighter-binding
            # operator follows the would-be denominator
            if (self.peek()[0] == "/" and self.peek(1)[0] == "int"
                    and self.peek(2)[0] not in ("^", "!")):
                self.next()
                den = int(self.next()[1])
                if den == 0:
                    raise ParseError("zero denominator", t[2])
                value = Fraction(value, den)
            return Num(value)
        if t[0] == "name":
            self.next()
            if self.peek()[0] == "(":
                return self.call(t)
            return Sym(t[1])
        if t[0] == "(":
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        if t[0] == "[":
            self.next()
            items = [self.expr()]
            while self.peek()[0] == ",":
                self.next()
                items.append(self.expr())
            self.expect("]")
            return ExprList(items)
        raise ParseError(f"unexpected {t[1]!r}", t[2], ("number", "symbol", "call", "("))

    def call(self, name_tok):
        name = name_tok[1]
        self.expect("(")
        args = [self.expr()]
        while self.peek()[0] == ",":
            self.next()
            args.append(self.expr())
        self.expect(")")
        if name == "binomial":
            if len(args) != 2:
                raise ParseError("binomial takes 2 arguments", name_tok[2])
            return Binomial(*args)
        if name == "pochhammer":
            if len(args) != 2:
                raise ParseError("pochhammer takes 2 arguments", name_tok[2])
            return Pochhammer(*args)
        if name == "gamma":
            if len(args) != 1:
                raise ParseError("gamma takes 1 argument", name_tok[2])
            return Gamma(args[0])
        if name == "factorial":
            if len(args) != 1:
                raise ParseError("factorial takes 1 argument", name_tok[2])
            return Factorial(args[0])
        if name in FUNCTIONS or name in ("hyperterm", "hypergeom"):
            return Call(name, args)
        raise ParseError(f"unknown function {name!r}", name_tok[2], FUNCTIONS)


def parse(text: str) -> Expr:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printer
# ---------------------------------------------------------------------------

_P_ADD, _P_MUL, _P_NEG, _P_POW, _P_POST, _P_ATOM = 1, 2, 3, 4, 5, 6


def _prec(e) -> int:
    if isinstance(e, Num):
        if e.value < 0:
            return _P_NEG
        return _P_MUL if e.value.denominator != 1 else _P_ATOM
    if isinstance(e, Sym):
        return _P_ATOM
    if isinstance(e, Add):
        return _P_ADD
    if isinstance(e, Mul):
        return _P_MUL
    if isinstance(e, Pow):
        return _P_POW
    return _P_ATOM  # calls, factorial postfix handled separately


def _wrap(e, level) -> str:
    s = to_string(e)
    if _prec(e) < level:
        return f"({s})"
    return s


def _sign_split(e):
    """Split off a leading minus sign for additive printing."""
    if isinstance(e, Num) and e.value < 0:
        return "-", Num(-e.value)
    if isinstance(e, Mul) and isinstance(e.args[0], Num) and e.args[0].value < 0:
        return "-", mul(Num(-e.args[0].value), *e.args[1:])
    return "+", e


def to_string(e: Expr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Add):
        args = list(e.args)
        # lead with a positive term when there is one
        if _sign_split(args[0])[0] == "-":
            for i, a in enumerate(args):
                if _sign_split(a)[0] == "+":
                    args.insert(0, args.pop(i))
                    break
        sign, first = _sign_split(args[0])
        out = ("-" if sign == "-" else "") + _wrap(first, _P_ADD + 1)
        for a in args[1:]:
            sign, body = _sign_split(a)
            out += f" {sign} {_wrap(body, _P_ADD + 1)}"
        return out
    if isinstance(e, Mul):
        sign = ""
        args = list(e.args)
        if isinstance(args[0], Num) and args[0].value < 0:
            if args[0].value == -1:
                args = args[1:]
            else:
                args[0] = Num(-args[0].value)
            sign = "-"
        nums, dens = [], []
        for a in args:
            if isinstance(a, Pow) and isinstance(a.exponent, Num) and a.exponent.value < 0:
                inv = pow_(a.base, Num(-a.exponent.value))
                dens.append(inv)
            else:
                nums.append(a)
        if not nums:
            nums = [Num(1)]
        # rational literals need no parens inside a product: "1/2*x" refuses
        # to parse as a division chain because of the literal-fusing rule
        out = "*".join(to_string(a) if isinstance(a, Num) else _wrap(a, _P_MUL + 1)
                       for a in nums)
        for d in dens:
            out += "/" + _wrap(d, _P_MUL + 1)
        return sign + out
    if isinstance(e, Pow):
        b = _wrap(e.base, _P_POST)
        if isinstance(e.base, Num) and (e.base.value < 0 or e.base.value.denominator != 1):
            b = f"({to_string(e.base)})"
        x = e.exponent
        if isinstance(x, (Sym,)) or (isinstance(x, Num) and x.value >= 0 and x.value.denominator == 1):
            return f"{b}^{to_string(x)}"
        if isinstance(x, Pow):
            return f"{b}^{to_string(x)}"
        return f"{b}^({to_string(x)})"
    if isinstance(e, Factorial):
        a = e.arg
        if isinstance(a, Sym) or (isinstance(a, Num) and a.value >= 0 and a.value.denominator == 1):
            return f"{to_string(a)}!"
        return f"({to_string(a)})!"
    if isinstance(e, Binomial):
        return f"binomial({to_string(e.top)},{to_string(e.bottom)})"
    if isinstance(e, Pochhammer):
        return f"pochhammer({to_string(e.base)},{to_string(e.count)})"
    if isinstance(e, Gamma):
        return f"gamma({to_string(e.arg)})"
    if isinstance(e, Call):
        return f"{e.name}({','.join(to_string(a) for a in e.args)})"
    if isinstance(e, ExprList):
        return f"[{','.join(to_string(a) for a in e.items)}]"
    raise TypeError(f"unprintable node {e!r}")


# ---------------------------------------------------------------------------
# structural helpers
# ---------------------------------------------------------------------------


def subs(e: Expr, bindings) -> Expr:
    """Substitute expressions (or exact scalars) for symbols."""
    if isinstance(e, Sym):
        if e.name in bindings:
            return _coerce(bindings[e.name])
        return e
    if isinstance(e, Num):
        return e
    if isinstance(e, Add):
        return add(*(subs(a, bindings) for a in e.args))
    if isinstance(e, Mul):
        return mul(*(subs(a, bindings) for a in e.args))
    if isinstance(e, Pow):
        return pow_(subs(e.base, bindings), subs(e.exponent, bindings))
    if isinstance(e, Factorial):
        return Factorial(subs(e.arg, bindings))
    if isinstance(e, Binomial):
        return Binomial(subs(e.top, bindings), subs(e.bottom, bindings))
    if isinstance(e, Pochhammer):
        return Pochhammer(subs(e.base, bindings), subs(e.count, bindings))
    if isinstance(e, Gamma):
        return Gamma(subs(e.arg, bindings))
    if isinstance(e, Call):
        return Call(e.name, tuple(subs(a, bindings) for a in e.args))
    if isinstance(e, ExprList):
        return ExprList(tuple(subs(a, bindings) for a in e.items))
    raise TypeError(f"bad node {e!r}")


def free_symbols(e: Expr) -> set:
    if isinstance(e, Sym):
        return {e.name}
    if isinstance(e, Num):
        return set()
    out = set()
    for c in e.children():
        if isinstance(c, Expr):
            out |= free_symbols(c)
    return out


def contains(e: Expr, name: str) -> bool:
    return name in free_symbols(e)


# ---------------------------------------------------------------------------
# differentiation
# ---------------------------------------------------------------------------


class DifferentiationError(ValueError):
    pass


def differentiate(e: Expr, v: str) -> Expr:
    if not contains(e, v):
        return Num(0)
    if isinstance(e, Sym):
        return Num(1)
    if isinstance(e, Add):
        return add(*(differentiate(a, v) for a in e.args))
    if isinstance(e, Mul):
        terms = []
        for i, a in enumerate(e.args):
            rest = e.args[:i] + e.args[i + 1:]
            terms.append(mul(differentiate(a, v), *rest))
        return add(*terms)
    if isinstance(e, Pow):
        u, w = e.base, e.exponent
        if not contains(w, v):
            return mul(w, pow_(u, add(w, Num(-1))), differentiate(u, v))
        if not contains(u, v):
            return mul(e, Call("ln", (u,)), differentiate(w, v))
        return mul(e, add(mul(differentiate(w, v), Call("ln", (u,))),
                          mul(w, differentiate(u, v), pow_(u, Num(-1)))))
    if isinstance(e, Call):
        rule = _DERIVATIVES.get(e.name)
        if rule is None:
            raise DifferentiationError(f"no derivative rule for {e.name}")
        return rule(e, v)
    raise DifferentiationError(f"cannot differentiate {type(e).__name__} node with respect to {v}")


def _chain(outer_derivative):
    def rule(e, v):
        (u,) = e.args
        return mul(outer_derivative(u), differentiate(u, v))
    return rule


_DERIVATIVES = {
    "exp": _chain(lambda u: Call("exp", (u,))),
    "ln": _chain(lambda u: pow_(u, Num(-1))),
    "sin": _chain(lambda u: Call("cos", (u,))),
    "cos": _chain(lambda u: neg(Call("sin", (u,)))),
    "arcsin": _chain(lambda u: pow_(add(Num(1), neg(pow_(u, Num(2)))), Num(Fraction(-1, 2)))),
    "arctan": _chain(lambda u: pow_(add(Num(1), pow_(u, Num(2))), Num(-1))),
    "sqrt": _chain(lambda u: mul(Num(Fraction(1, 2)), pow_(u, Num(Fraction(-1, 2))))),
    "erf": _chain(lambda u: mul(Num(2), pow_(Sym("pi"), Num(Fraction(-1, 2))),
                                Call("exp", (neg(pow_(u, Num(2))),)))),
}


def _besselj_derivative(e, v):
    nu, u = e.args
    du = differentiate(u, v)
    lower = Call("besselj", (add(nu, Num(-1)), u))
    upper = Call("besselj", (add(nu, Num(1)), u))
    return mul(Num(Fraction(1, 2)), add(lower, neg(upper)), du)


_DERIVATIVES["besselj"] = _besselj_derivative


# ---------------------------------------------------------------------------
# exact evaluation
# ---------------------------------------------------------------------------


class EvalError(ValueError):
    pass


def _rational_power(base: Fraction, exponent: Fraction) -> Fraction:
    if exponent.denominator == 1:
        n = exponent.numerator
        if base == 0 and n < 0:
            raise EvalError("zero to a negative power")
        return base ** n
    if base < 0:
        raise EvalError(f"negative base {base} with fractional exponent {exponent}")
    q = exponent.denominator

    def iroot(m, q):
        if m in (0, 1):
            return m
        r = round(m ** (1 / q))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** q == m:
                return cand
        raise EvalError(f"{m} has no exact {q}th root")

    root = Fraction(iroot(base.numerator, q), iroot(base.denominator, q))
    return root ** exponent.numerator


def _poch(a: Fraction, m: int) -> Fraction:
    if m >= 0:
        out = Fraction(1)
        for i in range(m):
            out *= a + i
        return out
    out = Fraction(1)
    for i in range(1, -m + 1):
        d = a - i
        if d == 0:
            raise EvalError(f"pochhammer({a}, {m}) hits a zero factor")
        out /= d
    return out


def _binom(n: Fraction, k: Fraction) -> Fraction:
    if k.denominator != 1:
        raise EvalError(f"binomial with non-integer count {k}")
    k = k.numerator
    if k < 0:
        return Fraction(0)
    if n.denominator == 1 and n >= 0:
        nn = n.numerator
        if k > nn:
            return Fraction(0)
        return Fraction(math.comb(nn, k))
    out = Fraction(1)
    for i in range(k):
        out *= (n - i) / (k - i)
    return out


def eval_at(e: Expr, bindings) -> Fraction:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Sym):
        if e.name in bindings:
            return Fraction(bindings[e.name])
        raise EvalError(f"unbound symbol {e.name}")
    if isinstance(e, Add):
        return sum((eval_at(a, bindings) for a in e.args), Fraction(0))
    if isinstance(e, Mul):
        out = Fraction(1)
        for a in e.args:
            out *= eval_at(a, bindings)
        return out
    if isinstance(e, Pow):
        return _rational_power(eval_at(e.base, bindings), eval_at(e.exponent, bindings))
    if isinstance(e, Factorial):
        a = eval_at(e.arg, bindings)
        if a.denominator != 1 or a < 0:
            raise EvalError(f"factorial of {a}")
        return Fraction(math.factorial(a.numerator))
    if isinstance(e, Binomial):
        return _binom(eval_at(e.top, bindings), eval_at(e.bottom, bindings))
    if isinstance(e, Pochhammer):
        m = eval_at(e.count, bindings)
        if m.denominator != 1:
            raise EvalError(f"pochhammer with non-integer count {m}")
        return _poch(eval_at(e.base, bindings), m.numerator)
    if isinstance(e, Gamma):
        a = eval_at(e.arg, bindings)
        if a.denominator != 1 or a <= 0:
            raise EvalError(f"gamma of {a} is not rational")
        return Fraction(math.factorial(a.numerator - 1))
    if isinstance(e, Call):
        raise EvalError(f"transcendental head {e.name} has no exact rational value")
    raise EvalError(f"cannot evaluate {e!r}")


# ---------------------------------------------------------------------------
# polynomial / rational-function bridges
# ---------------------------------------------------------------------------


class NotRationalError(ValueError):
    pass


def to_ratfunc(e: Expr) -> RatFunc:
    """Interpret a +,*,^ expression over symbols as an exact rational function."""
    if isinstance(e, Num):
        return RatFunc.const(e.value)
    if isinstance(e, Sym):
        return RatFunc.var(e.name)
    if isinstance(e, Add):
        out = RatFunc.const(0)
        for a in e.args:
            out = out + to_ratfunc(a)
        return out
    if isinstance(e, Mul):
        out = RatFunc.const(1)
        for a in e.args:
            out = out * to_ratfunc(a)
        return out
    if isinstance(e, Pow):
        if isinstance(e.exponent, Num) and e.exponent.value.denominator == 1:
            return to_ratfunc(e.base) ** e.exponent.value.numerator
        raise NotRationalError(f"non-integer exponent in {to_string(e)}")
    raise NotRationalError(f"not a rational expression: {to_string(e)}")


def to_poly(e: Expr) -> MPoly:
    r = to_ratfunc(e)
    if not r.is_polynomial():
        raise NotRationalError(f"not a polynomial: {to_string(e)}")
    return r.as_poly()


def from_poly(p: MPoly) -> Expr:
    terms = []
    for exp, c in sorted(p.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True):
        factors = [Num(c)] if c != 1 or not any(exp) else []
        if c == 1 and not any(exp):
            factors = [Num(1)]
        for v, d in zip(p.vars, exp):
            if d:
                factors.append(pow_(Sym(v), Num(d)))
        terms.append(mul(*factors) if factors else Num(c))
    return add(*terms) if terms else Num(0)


def from_ratfunc(r: RatFunc) -> Expr:
    if r.den == MPoly.one():
        return from_poly(r.num)
    return mul(from_poly(r.num), pow_(from_poly(r.den), Num(-1)))
