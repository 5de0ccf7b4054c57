"""
Writing a model in the .bcn language
====================================

Update blocks are lists of guarded cases; the first guard that holds wins.
"""

# %%
from bcnkit.dsl import compile_source, interpret, parse, round_trip

SOURCE = """
model Thermostat {
  input reading : {cold, ok, hot}
  state heater : {off, on}
  state alarm : {quiet, loud}
  output shown : {off, on}

  update heater {
    case reading == cold -> on;
    case reading == hot -> off;
    default -> heater;
  }
  // the alarm sees the heater's new value
  update alarm {
    case next(heater) == on && reading == hot -> loud;
    default -> quiet;
  }
  output shown { default -> heater; }
}
"""

ast = parse(SOURCE)
net = compile_source(SOURCE)
print("transition", net.transition.shape, "output", net.output_map.shape)

# %%
# The interpreter evaluates the same rules one assignment at a time
nxt, out = interpret(ast, {"reading": "cold"}, {"heater": "off", "alarm": "quiet"})
print(nxt, out)

# %%
# Pretty-printing gives source that parses back to the same tree
print(round_trip(ast))
assert parse(round_trip(ast)) == ast
