"""
문맥별 조건부 Shannon 접두 부호

길이 l(u) = ceil(-log2 p(u|문맥)) 을 유리수로 정확히 계산하고,
확률 내림차순(동률은 심볼 인덱스 순) 누적 구간의 앞 l 비트를 부호어로 쓴다.
"""

import itertools
from fractions import Fraction

import numpy as np

from system.exceptions import CodebookError, MalformedPrefixError, UnknownSymbolError
from system.information import entropy_bits


def shannon_length(probability):
    """2^-l <= p 를 만족하는 가장 작은 정수 l (p 는 Fraction)"""
    if probability <= 0:
        raise CodebookError("zero-probability symbols get no codeword")
    length = 0
    while Fraction(1, 2 ** length) > probability:
        length += 1
    return length


def _prefix_bits(value, length):
    """[0,1) 유리수의 이진 전개 앞 length 비트"""
    if length == 0:
        return ""
    integer = value.numerator * 2 ** length // value.denominator
    return format(integer, f"0{length}b")


class ContextCodebook:
    """
    한 (단계, 문맥) 의 접두 부호

    Attributes:
        pmf (np.ndarray): 부호가 맞춰진 조건부 분포
        codewords (dict): 심볼 -> '0'/'1' 문자열 (p = 0 심볼 제외)
    """

    def __init__(self, pmf, t=None, context=()):
        self.t = t
        self.context = tuple(context)
        self.pmf = np.asarray(pmf, dtype=float)
        exact = [Fraction(float(p)) for p in self.pmf]
        total = sum(exact)
        if total <= 0:
            raise CodebookError("context has no probability mass", stage=t)
        self.exact = [p / total for p in exact]
        order = sorted((u for u, p in enumerate(self.exact) if p > 0), key=lambda u: (-self.exact[u], u))
        self.codewords = {}
        cumulative = Fraction(0)
        for symbol in order:
            length = shannon_length(self.exact[symbol])
            self.codewords[symbol] = _prefix_bits(cumulative, length)
            cumulative += self.exact[symbol]
        self.decode_table = {word: symbol for symbol, word in self.codewords.items()}
        self.max_length = max(len(word) for word in self.codewords.values())
        if self.kraft_sum() > 1:
            raise CodebookError(f"Kraft sum {float(self.kraft_sum())} exceeds 1", stage=t)

    def length(self, symbol):
        return len(self.encode(symbol))

    def lengths(self):
        return {symbol: len(word) for symbol, word in self.codewords.items()}

    def kraft_sum(self):
        """sum 2^-l (정확한 유리수)"""
        return sum(Fraction(1, 2 ** len(word)) for word in self.codewords.values())

    def expected_length(self, pmf=None):
        """주어진 분포(기본: 맞춰진 분포) 아래 기대 부호 길이; 부호어 없는 심볼에 질량이 있으면 inf"""
        pmf = self.pmf / self.pmf.sum() if pmf is None else np.asarray(pmf, dtype=float)
        total = 0.0
        for symbol, p in enumerate(pmf):
            if p <= 0:
                continue
            if symbol not in self.codewords:
                return float("inf")
            total += p * len(self.codewords[symbol])
        return total

    def entropy(self):
        return float(entropy_bits(self.pmf / self.pmf.sum()))

    def encode(self, symbol):
        """
        심볼 -> 부호어

        Raises:
            UnknownSymbolError: 이 문맥에 부호어가 없는 심볼
        """
        try:
            return self.codewords[int(symbol)]
        except (KeyError, ValueError, TypeError):
            raise UnknownSymbolError(f"symbol {symbol!r} has no codeword in context {self.context}", stage=self.t)

    def decode(self, bits, offset=0):
        """
        비트열 앞부분에서 부호어 하나를 복호

        Returns:
            tuple: (심볼, 소비한 비트 수)

        Raises:
            MalformedPrefixError: 어떤 부호어로도 시작하지 않음
        """
        for length in range(self.max_length + 1):
            word = bits[offset:offset + length]
            if len(word) < length:
                break
            if word in self.decode_table:
                return self.decode_table[word], length
        raise MalformedPrefixError(
            f"bits {bits[offset:offset + self.max_length]!r} do not start with a codeword of context {self.context}",
            stage=self.t)


class CodebookSet:
    """(단계, 문맥) 별 ContextCodebook 모음"""

    def __init__(self, horizon, n_actions, books):
        self.horizon = horizon
        self.n_actions = n_actions
        self.books = books

    def codebook(self, t, context):
        key = (int(t), tuple(int(u) for u in context))
        if key not in self.books:
            raise CodebookError(f"no codebook for unreachable context {key[1]}", stage=t)
        return self.books[key]

    def encode(self, t, context, symbol):
        return self.codebook(t, context).encode(symbol)

    def decode(self, t, context, bits, offset=0):
        return self.codebook(t, context).decode(bits, offset)

    def kraft_ok(self):
        return all(book.kraft_sum() <= 1 for book in self.books.values())

    def stage_expected_lengths(self, action_marginal):
        """
        주어진 U_[n] 분포 아래 단계별 E[l(B_t)]

        코드북이 맞춰진 분포와 다른 분포를 넣으면 부호어가 없는 심볼에서 inf 가 된다.
        """
        action_marginal = np.asarray(action_marginal, dtype=float)
        lengths = []
        for t in range(1, self.horizon + 1):
            joint = action_marginal.sum(axis=tuple(range(t, self.horizon))) if t < self.horizon else action_marginal
            total = 0.0
            for context in itertools.product(range(self.n_actions), repeat=t - 1):
                row = joint[context]
                mass = float(row.sum())
                if mass <= 0:
                    continue
                key = (t, context)
                if key not in self.books:
                    return lengths + [float("inf")] * (self.horizon - t + 1)
                total += mass * self.books[key].expected_length(row / mass)
            lengths.append(total)
        return lengths

    def to_dict(self):
        """JSON 요약: 단계/문맥별 부호어"""
        return {
            f"{t}:{''.join(str(u) for u in context) or '-'}": {str(s): w for s, w in book.codewords.items()}
            for (t, context), book in sorted(self.books.items())
        }


def build_codebooks_from_marginal(action_marginal):
    """
    U_[n] 결합 분포 (형태 (|U|,)*n) 로부터 조건부 Shannon 코드북 생성

    도달 불가능한 문맥(질량 0)은 건너뛴다.
    """
    action_marginal = np.asarray(action_marginal, dtype=float)
    horizon = action_marginal.ndim
    n_actions = action_marginal.shape[0] if horizon else 1
    books = {}
    for t in range(1, horizon + 1):
        joint = action_marginal.sum(axis=tuple(range(t, horizon))) if t < horizon else action_marginal
        for context in itertools.product(range(n_actions), repeat=t - 1):
            row = joint[context]
            if row.sum() <= 0:
                continue
            books[(t, context)] = ContextCodebook(row / row.sum(), t, context)
    return CodebookSet(horizon, n_actions, books)


def build_codebooks(law):
    """
    혼합 법칙에 맞춘 문맥별 Shannon 코드북 생성

    Args:
        law (JointLaw | np.ndarray): 혼합 결합 법칙 또는 U_[n] 주변 분포

    Returns:
        CodebookSet: 모든 도달 가능 문맥의 코드북
    """
    marginal = law.action_marginal() if hasattr(law, "action_marginal") else law
    return build_codebooks_from_marginal(marginal)
