// Convenience umbrella: the whole library in one include.

#pragma once

#include "sheaflab/complex.hpp"
#include "sheaflab/errors.hpp"
#include "sheaflab/io.hpp"
#include "sheaflab/linalg.hpp"
#include "sheaflab/morphism.hpp"
#include "sheaflab/sheaf.hpp"
#include "sheaflab/zoo.hpp"
