# Galilei hybrid toolkit
