#pragma once

#include <qcd/error.hpp>
#include <qcd/quaternion.hpp>
#include <qcd/qmatrix.hpp>
#include <qcd/banded.hpp>
#include <qcd/spectra.hpp>
#include <qcd/shifts.hpp>
#include <qcd/bundles.hpp>
#include <qcd/canonical.hpp>
#include <qcd/fixtures.hpp>
#include <qcd/worked.hpp>
