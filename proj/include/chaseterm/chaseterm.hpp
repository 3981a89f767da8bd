#pragma once

#include "chaseterm/acyclicity.hpp"
#include "chaseterm/chase.hpp"
#include "chaseterm/homomorphism.hpp"
#include "chaseterm/knowledge_base.hpp"
#include "chaseterm/nonmonotonic.hpp"
#include "chaseterm/parser.hpp"
#include "chaseterm/unification.hpp"
