#pragma once

#include "curlstab/errors.hpp"
#include "curlstab/geometry.hpp"
#include "curlstab/quadrature.hpp"
#include "curlstab/monomials.hpp"
#include "curlstab/polyspace.hpp"
#include "curlstab/calculus.hpp"
#include "curlstab/piola.hpp"
#include "curlstab/minsolve.hpp"
#include "curlstab/problems.hpp"
#include "curlstab/checks.hpp"
#include "curlstab/harness.hpp"
