from __future__ import annotations

import pytest

from reciplab.compsys import generate_dataset
from reciplab.hecke import (FiniteOrderCharacter, HeckeCharacter, PrimeComponent, canonical_gaussian_character,
                            norm_character, trivial_character)
from reciplab.nf import CyclotomicField
from reciplab.primes import SplitPrime, primes_above
from reciplab.residue import primitive_root


@pytest.fixture(scope="session")
def gauss():
    return CyclotomicField(4)


@pytest.fixture(scope="session")
def q8():
    return CyclotomicField(8, units=[[1, 1, 0, -1]])


def gaussian_characters(K):
    """canonical, norm, and type (2,1) with an order-4 character at 2+i."""
    P = SplitPrime(K.element((2, 1)), 5)
    quartic = HeckeCharacter(K, K, (2, 1), FiniteOrderCharacter((PrimeComponent(P, 2, 4, 1),)))
    return [canonical_gaussian_character(K), norm_character(K), quartic]


def octic_characters(K):
    """types (1,1,1,1) with a quadratic character at a prime above 17, and (2,2,2,2) trivial."""
    P = primes_above(K, 17)[0]
    quad = FiniteOrderCharacter((PrimeComponent(P, primitive_root(17), 2, 1),))
    return [HeckeCharacter(K, K, (1, 1, 1, 1), quad), HeckeCharacter(K, K, (2, 2, 2, 2))]


@pytest.fixture(scope="session")
def gaussian_chars(gauss):
    return gaussian_characters(gauss)


@pytest.fixture(scope="session")
def gaussian_dataset(gaussian_chars):
    return generate_dataset(gaussian_chars, 300, 7)


@pytest.fixture(scope="session")
def trivial_norm_dataset(gauss):
    return generate_dataset([trivial_character(gauss), norm_character(gauss)], 60, 3)
