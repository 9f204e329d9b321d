"""
From natural language to an executed program
============================================

Matches plain-English questions against the question-form registry,
prints the translated program, and executes it on the box model.
"""

from amocqa import execute, match_question, print_program

QUESTIONS = [
    "What is the value of M_n at time step 4000 if Fwn is 5000?",
    "If Fwn is 45113 and M_ek is 2.7e7, does the AMOC collapse?",
    "If I increase Fwn by 2052, will salinity in the northern box increase?",
    "Setting the Ekman transport to 2.6e7, the freshwater flux in the "
    "northern ocean to 5.8e4, will M_n increase?",
]

for question in QUESTIONS:
    result = match_question(question)
    answer = execute(result.program)
    print(f"Q:  {question}")
    print(f"    form {result.form_id}")
    print(f"P:  {print_program(result.program)}")
    if answer.unit:
        print(f"A:  {answer.value:.6g} {answer.unit}")
    else:
        print(f"A:  {answer.value}")
    print()
